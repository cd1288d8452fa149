#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pipeforge/data.hpp"
#include "testutil.hpp"

// end-to-end checks against the built binary
#ifndef PIPEFORGE_BIN
#define PIPEFORGE_BIN "pipeforge"
#endif

namespace fs = std::filesystem;
using namespace pipeforge;

namespace {

int run_cli(const std::string& args) {
    std::string cmd = std::string(PIPEFORGE_BIN) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string strip_wall_column(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) {
        std::size_t start = 0;
        int field = 0;
        std::string kept;
        for (std::size_t i = 0; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                if (field != 4) {
                    if (!kept.empty()) kept += ',';
                    kept += line.substr(start, i - start);
                }
                start = i + 1;
                ++field;
            }
        }
        out += kept + "\n";
    }
    return out;
}

struct TestData {
    std::string csv = "/tmp/pipeforge_cli_data.csv";
    TestData() {
        auto d = testutil::mixed_na_table(110, 1, 3, 0.02, 909);
        save_csv(d.table, &d.target, "y", csv);
    }
    ~TestData() { std::remove(csv.c_str()); }
};

std::size_t line_count(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

}  // namespace

TEST_CASE("search subcommand writes the results file and exits 0") {
    TestData data;
    const std::string out = "/tmp/pipeforge_cli_out.csv";
    int code = run_cli("search --data " + data.csv +
                       " --target y --strategy all-one --blocks 1 --folds 4 --seed 3 "
                       "--registry stdsc,noop,pca,noop,dt,lsvc --out " +
                       out);
    CHECK(code == 0);
    std::string csv = slurp(out);
    // header + (2 learners + 4 PRPLs)
    CHECK(line_count(csv) == 7);
    CHECK(csv.rfind("signature,strategy,", 0) == 0);
    std::remove(out.c_str());
}

TEST_CASE("all-all row count equals the space product") {
    TestData data;
    const std::string out = "/tmp/pipeforge_cli_allall.csv";
    int code = run_cli("search --data " + data.csv +
                       " --target y --strategy all-all --blocks 1 --folds 3 --seed 3 "
                       "--registry stdsc,noop,pca,noop,dt,lsvc --out " +
                       out);
    CHECK(code == 0);
    CHECK(line_count(slurp(out)) == 1 + 2 * 2 * 2);
    std::remove(out.c_str());
}

TEST_CASE("identical runs give identical files apart from wall times") {
    TestData data;
    const std::string out1 = "/tmp/pipeforge_cli_d1.csv";
    const std::string out2 = "/tmp/pipeforge_cli_d2.csv";
    const std::string base = "search --data " + data.csv +
                             " --target y --strategy all-all --blocks 1 --folds 3 --seed 11 "
                             "--registry stdsc,noop,pca,noop,dt,lsvc";
    CHECK(run_cli(base + " --threads 1 --out " + out1) == 0);
    CHECK(run_cli(base + " --threads 2 --out " + out2) == 0);
    CHECK(strip_wall_column(slurp(out1)) == strip_wall_column(slurp(out2)));
    std::remove(out1.c_str());
    std::remove(out2.c_str());
}

TEST_CASE("bad arguments exit with 2") {
    TestData data;
    CHECK(run_cli("search --data " + data.csv + " --target y --strategy all-one --folds 1") == 2);
    CHECK(run_cli("search --data " + data.csv + " --target y --strategy one-all --blocks 2") == 2);
    CHECK(run_cli("search --data " + data.csv + " --target y --strategy bogus") == 2);
    CHECK(run_cli("search --target y --strategy all-one") == 2);
    CHECK(run_cli("surrogate train --data /tmp") == 2);
}

TEST_CASE("data problems exit with 3") {
    CHECK(run_cli("search --data /tmp/pipeforge_does_not_exist.csv --target y "
                  "--strategy all-one") == 3);
    TestData data;
    CHECK(run_cli("search --data " + data.csv + " --target nope --strategy all-one") == 3);
    CHECK(run_cli("surrogate apply --data " + data.csv +
                  " --target y --surrogate-prp /tmp/pipeforge_missing_model.json") == 3);
}

TEST_CASE("surrogate train then apply round trip") {
    // corpus of 3 tiny datasets with a manifest
    fs::path dir = "/tmp/pipeforge_cli_corpus";
    fs::create_directories(dir);
    {
        std::ofstream manifest(dir / "manifest.csv");
        manifest << "file,target\n";
        for (int i = 0; i < 3; ++i) {
            std::string name = "d" + std::to_string(i) + ".csv";
            auto d = i % 2 ? testutil::two_gaussians(70, 4.0, 0.4, 100 + i)
                           : testutil::xor_data(70, 100 + i);
            save_csv(d.table, &d.target, "y", (dir / name).string());
            manifest << name << ",y\n";
        }
    }
    const std::string prp = "/tmp/pipeforge_cli_prp.json";
    const std::string lr = "/tmp/pipeforge_cli_lr.json";
    int code = run_cli("surrogate train --data " + dir.string() +
                       " --folds 3 --seed 5 --registry stdsc,noop,pca,noop,dt,lsvc "
                       "--surrogate-prp " +
                       prp + " --surrogate-lr " + lr);
    // a tiny corpus can legitimately be single-label for one of the models;
    // accept a data-error exit but require the models when training succeeds
    REQUIRE((code == 0 || code == 3));
    if (code == 0) {
        CHECK(fs::exists(prp));
        CHECK(fs::exists(lr));
        TestData data;
        const std::string out = "/tmp/pipeforge_cli_apply.csv";
        int apply_code = run_cli("surrogate apply --data " + data.csv +
                                 " --target y --folds 3 --seed 5 "
                                 "--registry stdsc,noop,pca,noop,dt,lsvc --surrogate-prp " +
                                 prp + " --surrogate-lr " + lr + " --out " + out);
        CHECK(apply_code == 0);
        CHECK(line_count(slurp(out)) >= 2);
        std::remove(out.c_str());
    }
    std::remove(prp.c_str());
    std::remove(lr.c_str());
    fs::remove_all(dir);
}
