// Copyright 2026 The qmarg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "gtest/gtest.h"
#include "qmarg/cli.hpp"
#include "qmarg/serialization.hpp"

using namespace qmarg;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(const std::vector<std::string> &args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

class Workdir {
  public:
    Workdir() : path_(std::filesystem::temp_directory_path() / ("qmarg_cli_" + std::to_string(::getpid()))) {
        std::filesystem::create_directories(path_);
    }
    ~Workdir() { std::filesystem::remove_all(path_); }
    std::string file(const std::string &name) const { return (path_ / name).string(); }

  private:
    std::filesystem::path path_;
};

std::string slurp(const std::string &path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST(Cli, w_pipeline) {
    Workdir dir;
    ASSERT_EQ(run({"generate", "--family", "w", "--n", "3", "--d", "2", "--random", "1", "--out",
                   dir.file("w.json")})
                  .code,
              0);
    ASSERT_EQ(run({"marginals", "--state", dir.file("w.json"), "--k", "2", "--out", dir.file("m.json")})
                  .code,
              0);
    const CliRun r = run({"reconstruct", "--marginals", dir.file("m.json"), "--family", "w",
                       "--reference", dir.file("w.json"), "--out", dir.file("r.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    ASSERT_EQ(r.out.rfind("fidelity: ", 0), 0u);
    ASSERT_NEAR(std::stod(r.out.substr(10)), 1.0, 1e-9);
    const Json rec = parse_json(slurp(dir.file("r.json")));
    ASSERT_TRUE(rec.contains("certificate"));
    ASSERT_EQ(rec["amplitudes"].size(), 3u);
}

TEST(Cli, pipelines_for_each_family) {
    Workdir dir;
    struct Case {
        std::vector<std::string> generate;
        std::string k;
        std::vector<std::string> reconstruct;
    };
    const std::vector<Case> cases = {
        {{"--family", "dicke", "--n", "6", "--l", "2"}, "4", {"--family", "dicke", "--l", "2"}},
        {{"--family", "ddicke", "--d", "3", "--counts", "6,1,2"}, "6",
         {"--family", "ddicke", "--counts", "6,1,2"}},
        {{"--family", "w", "--n", "4", "--d", "3"}, "2", {"--family", "w"}},
    };
    for (const Case &c : cases) {
        std::vector<std::string> gen = {"generate", "--random", "3", "--out", dir.file("s.json")};
        gen.insert(gen.end(), c.generate.begin(), c.generate.end());
        ASSERT_EQ(run(gen).code, 0);
        ASSERT_EQ(run({"marginals", "--state", dir.file("s.json"), "--k", c.k, "--out", dir.file("m.json")}).code, 0);
        std::vector<std::string> rec = {"reconstruct", "--marginals", dir.file("m.json"),
                                        "--reference", dir.file("s.json"), "--out", dir.file("r.json")};
        rec.insert(rec.end(), c.reconstruct.begin(), c.reconstruct.end());
        const CliRun r = run(rec);
        ASSERT_EQ(r.code, 0) << r.err;
        ASSERT_NEAR(std::stod(r.out.substr(10)), 1.0, 1e-9);
    }
}

TEST(Cli, common_party_pipeline) {
    Workdir dir;
    ASSERT_EQ(run({"generate", "--family", "dicke", "--n", "5", "--l", "2", "--random", "8", "--out", dir.file("s.json")}).code, 0);
    ASSERT_EQ(run({"marginals", "--state", dir.file("s.json"), "--k", "3", "--common-party", "1", "--out", dir.file("m.json")}).code, 0);
    ASSERT_EQ(parse_json(slurp(dir.file("m.json")))["marginals"].size(), 6u);
    const CliRun r = run({"reconstruct", "--marginals", dir.file("m.json"), "--family", "dicke", "--l", "2",
                       "--common-party", "1", "--reference", dir.file("s.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    ASSERT_NE(r.out.find("fidelity: "), std::string::npos);
}

TEST(Cli, output_is_deterministic) {
    const CliRun a = run({"generate", "--family", "ddicke", "--d", "3", "--counts", "2,1,1", "--random", "5"});
    const CliRun b = run({"generate", "--family", "ddicke", "--d", "3", "--counts", "2,1,1", "--random", "5"});
    ASSERT_EQ(a.code, 0);
    ASSERT_EQ(a.out, b.out);
    ASSERT_EQ(parse_json(a.out)["amplitudes"].size(), 12u);
}

TEST(Cli, explicit_coefficients) {
    Workdir dir;
    std::ofstream(dir.file("c.json")) << "[[0.57735026918962573, 0], [0, 0.57735026918962573], [0.57735026918962573, 0]]";
    const CliRun r = run({"generate", "--family", "w", "--n", "3", "--d", "2", "--coeffs", dir.file("c.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const Json j = parse_json(r.out);
    ASSERT_NEAR(j["amplitudes"][0][1].get<double>(), 1.0 / std::sqrt(3.0), 1e-15);
}

TEST(Cli, demos_pass) {
    const CliRun r3 = run({"demo", "remark3", "--seed", "7"});
    ASSERT_EQ(r3.code, 0);
    ASSERT_NE(r3.out.find("bipartite marginals equal: true; states equal up to phase: false"),
              std::string::npos);
    ASSERT_NE(r3.out.find("PASS"), std::string::npos);
    const CliRun pm = run({"demo", "psi-minus"});
    ASSERT_EQ(pm.code, 0);
    ASSERT_NE(pm.out.find("Infeasible"), std::string::npos);
    ASSERT_NE(pm.out.find("kill chain covers 8/8 diagonals"), std::string::npos);
    ASSERT_NE(pm.out.find("PASS"), std::string::npos);
}

TEST(Cli, qmp_check_prints_verdict) {
    Workdir dir;
    ASSERT_EQ(run({"generate", "--family", "w", "--n", "3", "--d", "2", "--random", "1", "--out", dir.file("w.json")}).code, 0);
    ASSERT_EQ(run({"marginals", "--state", dir.file("w.json"), "--k", "2", "--out", dir.file("m.json")}).code, 0);
    const CliRun r = run({"qmp-check", "--marginals", dir.file("m.json")});
    ASSERT_EQ(r.code, 0);
    const Json v = parse_json(r.out);
    ASSERT_EQ(v["verdict"], "Undetermined");
    ASSERT_EQ(v["surviving"], Json::array({1, 2, 4}));
    const CliRun s = run({"qmp-check", "--marginals", dir.file("m.json"), "--solver"});
    ASSERT_EQ(s.code, 0);
    ASSERT_EQ(parse_json(s.out)["verdict"], "FeasibleWitness");
}

TEST(Cli, exit_codes) {
    Workdir dir;
    ASSERT_EQ(run({}).code, 2);
    ASSERT_EQ(run({"frobnicate"}).code, 2);
    ASSERT_EQ(run({"marginals", "--state", dir.file("missing.json"), "--k", "2"}).code, 2);
    std::ofstream(dir.file("bad.json")) << "{ not json";
    ASSERT_EQ(run({"marginals", "--state", dir.file("bad.json"), "--k", "2"}).code, 2);
    ASSERT_EQ(run({"generate", "--family", "w", "--n", "3", "--random", "1", "--out", dir.file("w.json")}).code, 0);
    const CliRun k = run({"marginals", "--state", dir.file("w.json"), "--k", "3"});
    ASSERT_EQ(k.code, 1);
    ASSERT_NE(k.err.find("k-out-of-range"), std::string::npos);
    ASSERT_EQ(run({"marginals", "--state", dir.file("w.json"), "--k", "2", "--out", dir.file("m.json")}).code, 0);
    const CliRun wrong = run({"reconstruct", "--marginals", dir.file("m.json"), "--family", "dicke", "--l", "1"});
    ASSERT_EQ(wrong.code, 1);
    ASSERT_NE(wrong.err.find("unsupported-regime"), std::string::npos);
}
