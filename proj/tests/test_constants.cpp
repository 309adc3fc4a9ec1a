#include <catch2/catch_amalgamated.hpp>

#include "ariel/constants.hpp"
#include "ariel/errors.hpp"

using namespace ariel;

TEST_CASE("define lines yield integer constants") {
  auto table = extract_constants(
      "#define MYTASK 7\n"
      "#define HEARTBEAT 150\n");
  REQUIRE(table.size() == 2);
  CHECK(table.at("MYTASK") == 7);
  CHECK(table.at("HEARTBEAT") == 150);
}

TEST_CASE("non-define lines are ignored") {
  auto table = extract_constants(
      "// C header shared with the application\n"
      "#include <stdint.h>\n"
      "#define SPARE 12\n"
      "typedef int task_id;\n"
      "\n"
      "#define CONTROLLER 2\n");
  REQUIRE(table.size() == 2);
  CHECK(table.at("SPARE") == 12);
  CHECK(table.at("CONTROLLER") == 2);
}

TEST_CASE("negative values are accepted") {
  auto table = extract_constants("#define OFFSET -3\n");
  CHECK(table.at("OFFSET") == -3);
}

TEST_CASE("redefinition raises DuplicateConstant") {
  try {
    extract_constants("#define A 1\n#define A 2\n");
    FAIL("expected DuplicateConstant");
  } catch (const DuplicateConstant& e) {
    CHECK(e.name == "A");
    CHECK(e.line == 2);
  }
}

TEST_CASE("redefinition across merged headers is also rejected") {
  ConstantTable table;
  merge_constants(table, "#define MYTASK 7\n");
  REQUIRE_THROWS_AS(merge_constants(table, "#define MYTASK 8\n"),
                    DuplicateConstant);
}

TEST_CASE("define without an integer value is malformed") {
  REQUIRE_THROWS_AS(extract_constants("#define NAME\n"), MalformedDefine);
  REQUIRE_THROWS_AS(extract_constants("#define NAME x7\n"), MalformedDefine);
  REQUIRE_THROWS_AS(extract_constants("#define NAME 1.5\n"), MalformedDefine);
  REQUIRE_THROWS_AS(extract_constants("#define NAME 1 2\n"), MalformedDefine);
}
