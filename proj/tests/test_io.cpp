#include "catch_amalgamated.hpp"

#include <cmath>
#include <sstream>

#include "klentropy/config.hpp"
#include "klentropy/csv.hpp"
#include "klentropy/distributions.hpp"
#include "klentropy/error.hpp"

using namespace klentropy;

TEST_CASE("real formatting round-trips", "[io]") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(1.0) == "1");
  CHECK(format_real(1e-5) == "1.0000000000000001e-05");
  CHECK(format_real(INFINITY) == "inf");
  CHECK(format_real(-INFINITY) == "-inf");
  CHECK(format_real(NAN) == "nan");
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 4.9e-324}) {
    CHECK(parse_real(format_real(v)) == v);
  }
  CHECK(std::isinf(parse_real("inf")));
  CHECK_THROWS_AS(parse_real("1,5"), UsageError);
  CHECK_THROWS_AS(parse_real(""), UsageError);
  CHECK_THROWS_AS(parse_real("abc"), UsageError);
}

TEST_CASE("dataset csv round trip", "[io]") {
  const Dataset d = sample(DistributionSpec::gaussian(3), 50, 9);
  std::stringstream s;
  write_dataset_csv(s, d);
  CHECK(s.str().find('\r') == std::string::npos);
  const Dataset back = read_dataset_csv(s, d.space());
  CHECK(back == d);
  std::stringstream s2(s.str());
  CHECK(read_dataset_csv(s2, SpaceKind::euclidean) == d);
}

TEST_CASE("dataset csv parsing", "[io]") {
  std::istringstream in("# comment\n0.5, 0.25\n\n1.5,2\n");
  const Dataset d = read_dataset_csv(in, SpaceKind::flat_torus);
  CHECK(d.size() == 2);
  CHECK(d.dim() == 2);
  CHECK(d.point(1)[0] == 0.5);  // wrapped
  std::istringstream ragged("1,2\n3\n");
  CHECK_THROWS_AS(read_dataset_csv(ragged, SpaceKind::euclidean), Error);
  std::istringstream junk("1,x\n");
  CHECK_THROWS_AS(read_dataset_csv(junk, SpaceKind::euclidean), UsageError);
}

TEST_CASE("key value config", "[io]") {
  std::istringstream in(
      "# sweep\n"
      "experiment = variance_sweep\n"
      "n_grid = 250, 500,1000  # trailing comment\n"
      "sigma=1.5\n"
      "\n"
      "seed = 18446744073709551615\n");
  const auto c = KeyValueConfig::parse(in);
  CHECK(c.get_string("experiment", "") == "variance_sweep");
  CHECK(c.get_ints("n_grid") == std::vector<long long>{250, 500, 1000});
  CHECK(c.get_real("sigma", 0.0) == 1.5);
  CHECK(c.get_u64("seed", 0) == 18446744073709551615ULL);
  CHECK(c.get_real("missing", 2.0) == 2.0);
  CHECK(c.unused_keys().empty());

  std::istringstream dup("a = 1\na = 2\n");
  CHECK_THROWS_AS(KeyValueConfig::parse(dup), UsageError);
  std::istringstream bad("just words\n");
  CHECK_THROWS_AS(KeyValueConfig::parse(bad), UsageError);
  std::istringstream num("k = one\n");
  CHECK_THROWS_AS(KeyValueConfig::parse(num).get_int("k", 1), UsageError);
  CHECK(split_list(" a, b ,c") == std::vector<std::string>{"a", "b", "c"});
}
