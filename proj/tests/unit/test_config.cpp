#include <doctest.h>

#include "tubenet/config.hpp"
#include "tubenet/error.hpp"

using namespace tubenet;

TEST_CASE("config parses sections, scalars and arrays") {
  const Config c = Config::parse(R"(# comment
[scenario]
name = "cylinder"   # trailing comment

[mesh]
h = [0.2, 0.1, 5e-2]
levels = 2
[coupling]
methods = ["ls", "ps-a"]
exact = true
)");
  CHECK(c.string("scenario.name", "") == "cylinder");
  CHECK(c.numbers("mesh.h", {}) == std::vector<double>{0.2, 0.1, 0.05});
  CHECK(c.integer("mesh.levels", 0) == 2);
  CHECK(c.strings("coupling.methods", {}) == std::vector<std::string>{"ls", "ps-a"});
  CHECK(c.boolean("coupling.exact", false));
  CHECK(c.number("missing.key", 4.5) == 4.5);
  CHECK(c.numbers("mesh.levels", {}) == std::vector<double>{2.0});
  CHECK(c.keys().size() == 5);
}

TEST_CASE("config set overrides and adds values") {
  Config c = Config::parse("[coupling]\nlvlmax = 3\n");
  c.set("coupling.lvlmax", "1");
  c.set("mesh.levels", "2");
  CHECK(c.integer("coupling.lvlmax", 0) == 1);
  CHECK(c.integer("mesh.levels", 0) == 2);
  CHECK_THROWS_AS(c.set("mesh.levels", "[1, "), Error);
}

TEST_CASE("config errors carry the parse code") {
  for (const char* bad : {"[unclosed\n", "key_without_value\n", "x = \"open\n", "[a]\nb = 1\nb = 2\n"}) {
    try {
      Config::parse(bad);
      FAIL("accepted: " << bad);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Parse);
    }
  }
  const Config c = Config::parse("[mesh]\nh = 0.1\nspacing = 2\n");
  CHECK_NOTHROW(c.require_known({"mesh.h", "mesh.spacing"}));
  CHECK_THROWS_AS(c.require_known({"mesh.h"}), Error);
  CHECK_THROWS_AS(c.integer("mesh.h", 0), Error);
  CHECK_THROWS_AS(c.string("mesh.h", ""), Error);
  CHECK_THROWS_AS(Config::load("/nonexistent/config.toml"), Error);
}
