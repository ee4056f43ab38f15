#include <doctest.h>

#include <filesystem>

#include "dlas/io.hpp"
#include "dlas/runconfig.hpp"

using namespace dlas;

TEST_CASE("valid configs parse with defaults") {
    RunConfig cfg = parse_run_config(R"({
        "schema_version": 1,
        "preset": "example-line",
        "seed": 42,
        "example_line": {"variant": "xi", "T": 8, "replicas": 10}
    })");
    CHECK(cfg.preset == "example-line");
    CHECK(cfg.seed == 42);
    CHECK(cfg.workers == 1);
    CHECK(cfg.asserts == AssertLevel::invariants);
    CHECK(!cfg.preset_json.empty());
}

TEST_CASE("unknown fields are errors, not warnings") {
    CHECK_THROWS_AS(parse_run_config(R"({"preset": "idla", "tpyo": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"preset": "idla", "debug": {"verbose": true}})"),
                    ConfigError);
}

TEST_CASE("invalid values carry field-level messages") {
    CHECK_THROWS_AS(parse_run_config(R"({"preset": "idla", "workers": 0})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"preset": "idla", "significance": 0.5})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"preset": "idla", "assert": "loud"})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config(R"({"schema_version": 2, "preset": "idla"})"), ConfigError);
    CHECK_THROWS_AS(parse_run_config("not json"), ConfigError);
}

TEST_CASE("pmfs must sum to one") {
    RunConfig cfg = parse_run_config(R"({
        "preset": "idla",
        "out_dir": "/tmp/dlas_cfg_test",
        "idla": {"graph": {"type": "interval", "lo": 0, "hi": 3}, "root": 0,
                  "eta": [[0, "0.5"], [2, "0.4"]], "replicas": 5}
    })");
    CHECK_THROWS_WITH_AS(run_preset(cfg), doctest::Contains("sum to 1"), ConfigError);
}

TEST_CASE("window too small is refused with the check named") {
    RunConfig cfg = parse_run_config(R"({
        "preset": "example-line",
        "out_dir": "/tmp/dlas_cfg_test2",
        "example_line": {"variant": "xi", "T": 20, "window": [-4, 32], "replicas": 5}
    })");
    CHECK_THROWS_WITH_AS(run_preset(cfg), doctest::Contains("window too small"), ConfigError);
}

TEST_CASE("overrides take effect") {
    RunConfig cfg = parse_run_config(R"({"preset": "idla", "seed": 1})");
    CliOverrides o;
    o.seed = 99;
    o.workers = 4;
    o.assert_level = "full";
    o.out_dir = "/tmp/elsewhere";
    apply_overrides(cfg, o);
    CHECK(cfg.seed == 99);
    CHECK(cfg.workers == 4);
    CHECK(cfg.asserts == AssertLevel::full);
    CHECK(cfg.out_dir == "/tmp/elsewhere");
}

TEST_CASE("run_preset writes the documented file set deterministically") {
    std::string text = R"({
        "preset": "example-line",
        "seed": 5,
        "out_dir": "/tmp/dlas_out_a",
        "example_line": {"variant": "xi_prime", "T": 8, "window": [-10, 20], "replicas": 200}
    })";
    RunConfig a = parse_run_config(text);
    REQUIRE(run_preset(a) == 0);
    RunConfig b = parse_run_config(text);
    b.out_dir = "/tmp/dlas_out_b";
    REQUIRE(run_preset(b) == 0);
    for (const char* name : {"summary.json", "replicas.csv", "stoploss.tsv", "manifest.json"}) {
        auto fa = io::read_text_file(std::filesystem::path("/tmp/dlas_out_a") / name);
        auto fb = io::read_text_file(std::filesystem::path("/tmp/dlas_out_b") / name);
        CHECK(fa == fb); // byte-identical reruns
        CHECK(!fa.empty());
    }
}

TEST_CASE("enumerate writes exact rational rows") {
    RunConfig cfg = parse_run_config(R"({
        "preset": "enumerate",
        "out_dir": "/tmp/dlas_out_enum",
        "enumerate": {"graph": {"type": "interval", "lo": 0, "hi": 2}, "xi0": {"1": 1},
                      "T": 2, "statistic": "occupation", "h": "all"}
    })");
    REQUIRE(run_enumerate(cfg) == 0);
    auto csv = io::read_text_file("/tmp/dlas_out_enum/distribution.csv");
    CHECK(csv == "value,numerator,denominator\n2,1,1\n");
}

TEST_CASE("csv column reader handles headers and indices") {
    io::write_text_file("/tmp/dlas_csv_test.csv", "replica,v\n0,1.5\n1,2.5\n");
    auto col = io::read_csv_column("/tmp/dlas_csv_test.csv", "v");
    CHECK(col == std::vector<double>{1.5, 2.5});
    io::write_text_file("/tmp/dlas_csv_test2.csv", "3.0\n4.0\n");
    auto col2 = io::read_csv_column("/tmp/dlas_csv_test2.csv", "0");
    CHECK(col2 == std::vector<double>{3.0, 4.0});
    CHECK_THROWS_AS(io::read_csv_column("/tmp/dlas_csv_test.csv", "missing"), ConfigError);
}
