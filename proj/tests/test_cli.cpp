#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "delayq/moment_engine.hpp"
#include "helpers.hpp"

using nlohmann::json;

namespace {

std::string tmp_dir() {
    static std::string dir = [] {
        char templ[] = "/tmp/delayq_cli_XXXXXX";
        const char* d = mkdtemp(templ);
        REQUIRE(d != nullptr);
        return std::string(d);
    }();
    return dir;
}

int run(const std::string& args, const std::string& stdout_file = "") {
    std::string cmd = std::string(DELAYQ_CLI_PATH) + " " + args;
    if (!stdout_file.empty()) cmd += " > " + stdout_file;
    cmd += " 2> " + tmp_dir() + "/stderr.txt";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string write_model(const std::string& name, const json& j) {
    std::string path = tmp_dir() + "/" + name;
    std::ofstream out(path);
    out << j.dump(2);
    return path;
}

json reference_two_type() {
    return {{"k", 2},
            {"interarrival", {{"family", "exponential"}, {"rate", 1.0}}},
            {"delays",
             {{{"family", "exponential"}, {"rate", 1.0}},
              {{"family", "exponential"}, {"rate", 1.0}}}},
            {"delta", 0.2},
            {"batch", {{"kind", "multinomial"}, {"M", 2}, {"p", {0.5, 0.5}}}}};
}

// Minimal structural validation against the shipped schema: checks the
// required keys and their primitive types, recursing into arrays/objects.
void check_schema(const json& value, const json& schema) {
    std::string type = schema.value("type", "");
    if (type == "object") {
        REQUIRE(value.is_object());
        for (const auto& key : schema.value("required", json::array()))
            CHECK_MESSAGE(value.contains(key.get<std::string>()),
                          "missing key: " << key.get<std::string>());
        if (schema.contains("properties")) {
            for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it)
                if (value.contains(it.key())) check_schema(value[it.key()], it.value());
        }
    } else if (type == "array") {
        REQUIRE(value.is_array());
        if (schema.contains("items"))
            for (const auto& item : value) check_schema(item, schema["items"]);
    } else if (type == "number") {
        CHECK(value.is_number());
    } else if (type == "integer") {
        CHECK(value.is_number_integer());
    } else if (type == "string") {
        CHECK(value.is_string());
    } else if (type == "boolean") {
        CHECK(value.is_boolean());
    }
}

}  // namespace

TEST_CASE("chi subcommand emits the analytic value as JSON") {
    std::string model = write_model("two_type.json", reference_two_type());
    std::string out = tmp_dir() + "/chi.json";
    REQUIRE(run("chi --model " + model + " --n 1,1", out) == 0);
    json j = json::parse(slurp(out));

    delayq::ModelSpec m = delayq::ModelSpec::from_json(reference_two_type());
    delayq::MomentTable table(m);
    CHECK(j["chi"].get<double>() ==
          doctest::Approx(table.chi(delayq::MultiIndex({1, 1}))).epsilon(1e-15));
    check_schema(j, json::parse(slurp(std::string(DELAYQ_SCHEMA_DIR) +
                                      "/chi_output.schema.json")));
}

TEST_CASE("chi table has (H+1)^k - 1 rows") {
    std::string model = write_model("two_type.json", reference_two_type());
    std::string out = tmp_dir() + "/chi.csv";
    REQUIRE(run("chi --model " + model + " --all-upto 2 --format csv", out) == 0);
    std::string text = slurp(out);
    int lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    CHECK(lines == 9);  // header + 8 rows
    CHECK(text.rfind("n1,n2,chi", 0) == 0);
}

TEST_CASE("identical runs produce byte-identical files") {
    std::string model = write_model("two_type.json", reference_two_type());
    std::string out1 = tmp_dir() + "/a.csv", out2 = tmp_dir() + "/b.csv";
    REQUIRE(run("chi --model " + model + " --all-upto 3 --format csv --out " + out1) == 0);
    REQUIRE(run("chi --model " + model + " --all-upto 3 --format csv --out " + out2) == 0);
    CHECK(slurp(out1) == slurp(out2));

    std::string sim1 = tmp_dir() + "/s1.json", sim2 = tmp_dir() + "/s2.json";
    REQUIRE(run("simulate --model " + model +
                    " --t 8 --reps 2000 --seed 11 --stats n=1,1 --out " + sim1) == 0);
    REQUIRE(run("simulate --model " + model +
                    " --t 8 --reps 2000 --seed 11 --stats n=1,1 --out " + sim2) == 0);
    CHECK(slurp(sim1) == slurp(sim2));
}

TEST_CASE("simulate output is schema-valid") {
    std::string model = write_model("one_type.json",
                                    json{{"k", 1},
                                         {"interarrival", {{"family", "exponential"}, {"rate", 1.0}}},
                                         {"delays", {{{"family", "exponential"}, {"rate", 2.0}}}},
                                         {"delta", 0.0},
                                         {"batch", {{"kind", "multinomial"}, {"M", 1}, {"p", {1.0}}}}});
    std::string out = tmp_dir() + "/sim.json";
    REQUIRE(run("simulate --model " + model +
                    " --t 10 --reps 1000 --seed 3 --stats \"n=1;workload\"",
                out) == 0);
    json j = json::parse(slurp(out));
    REQUIRE(j.is_array());
    CHECK(j.size() == 3);  // moment, workload mean, workload covariance
    check_schema(j, json::parse(slurp(std::string(DELAYQ_SCHEMA_DIR) +
                                      "/simulate_output.schema.json")));
}

TEST_CASE("workload and expansion outputs are schema-valid") {
    std::string model = write_model("wl.json",
                                    json{{"k", 1},
                                         {"interarrival", {{"family", "exponential"}, {"rate", 2.0}}},
                                         {"delays", {{{"family", "exponential"}, {"rate", 1.0}}}},
                                         {"delta", 0.0},
                                         {"batch", {{"kind", "multinomial"}, {"M", 1}, {"p", {1.0}}}}});
    std::string out = tmp_dir() + "/wl.json";
    REQUIRE(run("workload --model " + model, out) == 0);
    check_schema(json::parse(slurp(out)),
                 json::parse(slurp(std::string(DELAYQ_SCHEMA_DIR) +
                                   "/workload_output.schema.json")));

    std::string exp_out = tmp_dir() + "/exp.json";
    REQUIRE(run("expansion --model " + model + " --type 1", exp_out) == 0);
    json e = json::parse(slurp(exp_out));
    CHECK(e["a_star"].get<double>() == doctest::Approx(-2.0));
    check_schema(e, json::parse(slurp(std::string(DELAYQ_SCHEMA_DIR) +
                                      "/expansion_output.schema.json")));
}

TEST_CASE("transient subcommand writes the documented CSV header") {
    std::string model = write_model("two_type.json", reference_two_type());
    std::string out = tmp_dir() + "/grid.csv";
    REQUIRE(run("transient --model " + model + " --n 1,0 --h 0.01 --tmax 5 --out " + out) == 0);
    std::string text = slurp(out);
    CHECK(text.rfind("t,M_tilde,h_lower_or_upper,R_bound", 0) == 0);
}

TEST_CASE("validate passes on a consistent model and flags a corrupted one") {
    std::string model = write_model("two_type.json", reference_two_type());
    std::string out = tmp_dir() + "/validate.txt";
    std::string args = "validate --model " + model +
                       " --upto 2 --t 20 --reps 20000 --seed 5 --h 0.005 --tmax 30";
    CHECK(run(args, out) == 0);

    CHECK(run(args + " --corrupt-chi 1,1", out) == 1);
    std::string text = slurp(out);
    CHECK(text.find("(1,1)") != std::string::npos);
    CHECK(text.find("FAIL") != std::string::npos);

    // an empty index range reports nothing and succeeds
    CHECK(run("validate --model " + model + " --upto 0 --reps 200 --h 0.01 --tmax 5", out) == 0);
}

TEST_CASE("configuration errors exit with code 2") {
    CHECK(run("chi --model /nonexistent.json --n 1") == 2);

    std::string bad = tmp_dir() + "/bad.json";
    std::ofstream(bad) << "{ not json";
    CHECK(run("chi --model " + bad + " --n 1") == 2);

    std::string model = write_model("two_type.json", reference_two_type());
    CHECK(run("chi --model " + model + " --n 1") == 2);      // wrong dimension
    CHECK(run("chi --model " + model) == 2);                 // neither --n nor --all-upto
    CHECK(run("nonsense --model " + model) == 2);            // unknown subcommand
}
