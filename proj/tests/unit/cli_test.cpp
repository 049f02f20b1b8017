// Copyright 2026 The superres Authors
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

#include <gtest/gtest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "superres/cli/commands.hpp"
#include "superres/cli/config.hpp"
#include "superres/cli/presets.hpp"
#include "superres/cli/record.hpp"
#include "superres/cli/toml_lite.hpp"
#include "superres/errors.hpp"

namespace superres::cli {
namespace {

namespace fs = std::filesystem;
using superres::testing::for_all;
using superres::testing::Gen;

// ---------------------------------------------------------------------------
// TOML subset

std::string random_key(Gen& g) {
    static const std::string alphabet = "abcdefghijklmnopqrstuvwxyz_-0123456789";
    std::string k(1, static_cast<char>('a' + g.integer(0, 25)));
    const auto len = g.integer(0, 8);
    for (std::int64_t i = 0; i < len; ++i) {
        k += alphabet[static_cast<std::size_t>(g.integer(0, static_cast<std::int64_t>(alphabet.size()) - 1))];
    }
    return k;
}

TomlScalar random_scalar(Gen& g) {
    switch (g.integer(0, 3)) {
        case 0:
            return g.coin();
        case 1:
            return std::int64_t{g.integer(-1'000'000'000, 1'000'000'000)};
        case 2:
            return g.normal() * std::pow(10.0, g.uniform(-20, 20));
        default: {
            static const std::string chars = "abc XYZ\"\\\t\n#=[],'019";
            std::string s;
            const auto len = g.integer(0, 12);
            for (std::int64_t i = 0; i < len; ++i) {
                s += chars[static_cast<std::size_t>(g.integer(0, static_cast<std::int64_t>(chars.size()) - 1))];
            }
            return s;
        }
    }
}

TomlValue random_value(Gen& g) {
    if (g.integer(0, 4) == 0) {
        TomlArray a;
        const auto len = g.integer(0, 5);
        for (std::int64_t i = 0; i < len; ++i) {
            a.push_back(random_scalar(g));
        }
        return a;
    }
    return std::visit([](auto&& v) -> TomlValue { return v; }, random_scalar(g));
}

TomlTable random_table(Gen& g) {
    TomlTable t;
    const auto n = g.integer(0, 6);
    for (std::int64_t i = 0; i < n; ++i) {
        t[random_key(g)] = random_value(g);
    }
    return t;
}

TEST(Toml, SerializeParseRoundTrip) {
    for_all(300, 101, [](Gen& g) {
        TomlDoc doc;
        doc.root = random_table(g);
        const auto n = g.integer(0, 3);
        for (std::int64_t i = 0; i < n; ++i) {
            doc.tables[random_key(g)] = random_table(g);
        }
        const std::string text = serialize_toml(doc);
        EXPECT_EQ(parse_toml(text), doc) << text;
        EXPECT_EQ(serialize_toml(parse_toml(text)), text);
    });
}

TEST(Toml, ParsesCommentsAndTypes) {
    const TomlDoc d = parse_toml(
        "# header\n"
        "a = 1  # trailing\n"
        "b = 2.5\n"
        "c = \"x # not a comment\"\n"
        "d = [1, 2.0, \"s\", true]\n"
        "e = -inf\n"
        "\n"
        "[tab]\n"
        "f = false\n");
    EXPECT_EQ(std::get<std::int64_t>(d.root.at("a")), 1);
    EXPECT_EQ(std::get<double>(d.root.at("b")), 2.5);
    EXPECT_EQ(std::get<std::string>(d.root.at("c")), "x # not a comment");
    EXPECT_EQ(std::get<TomlArray>(d.root.at("d")).size(), 4u);
    EXPECT_TRUE(std::isinf(std::get<double>(d.root.at("e"))));
    EXPECT_FALSE(std::get<bool>(d.tables.at("tab").at("f")));
}

TEST(Toml, ErrorsNameTheLine) {
    const char* bad[] = {"a = \n", "a = 1\na = 2\n", "[t]\n[t]\n", "a = [1, [2]]\n", "= 3\n", "a = \"open\n",
                         "a = 1 2\n"};
    for (const char* text : bad) {
        EXPECT_THROW(parse_toml(text), InputError) << text;
    }
    try {
        parse_toml("a = 1\nb = ?\n");
        FAIL();
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
}

// ---------------------------------------------------------------------------
// Configuration

TEST(Config, DefaultsMergeAndTypedAccess) {
    const CommandSpec& spec = command_spec("fisher-scan");
    RunConfig cfg = RunConfig::defaults(spec);
    EXPECT_EQ(cfg.command, "fisher-scan");
    cfg.merge(parse_toml("seed = 5\nthreads = 2\n[fisher-scan]\nsigma_t = 3\n"), spec, "test");
    EXPECT_EQ(cfg.real("sigma_t"), 3.0);
    EXPECT_EQ(cfg.seed, std::optional<std::uint64_t>(5));
    EXPECT_EQ(cfg.threads, 2);
    cfg.set_from_text(spec, "omega_r_t", "0.05");
    EXPECT_EQ(cfg.real("omega_r_t"), 0.05);
    EXPECT_EQ(RunConfig::from_toml(cfg.to_toml(), spec), cfg);
}

TEST(Config, UnknownAndMistypedFieldsAreNamed) {
    const CommandSpec& spec = command_spec("fisher-scan");
    RunConfig cfg = RunConfig::defaults(spec);
    auto message = [&](const std::string& text) {
        try {
            cfg.merge(parse_toml(text), spec, "cfg.toml");
        } catch (const InputError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(message("[fisher-scan]\nsigmat = 1\n").find("sigmat"), std::string::npos);
    EXPECT_NE(message("[fisher-scan]\nsigma_t = \"big\"\n").find("sigma_t"), std::string::npos);
    EXPECT_NE(message("[mle]\nshots = 1\n").find("mle"), std::string::npos);
    EXPECT_NE(message("colour = 1\n").find("colour"), std::string::npos);
    EXPECT_THROW(cfg.set_from_text(spec, "sigma_t", "abc"), InputError);
    EXPECT_THROW(cfg.set_from_text(spec, "nope", "1"), InputError);
    EXPECT_THROW(cfg.require_seed(), InputError);
}

TEST(Config, GridSyntax) {
    const auto g = parse_grid("1:2:5");
    ASSERT_EQ(g.size(), 5u);
    EXPECT_EQ(g.front(), 1.0);
    EXPECT_EQ(g.back(), 2.0);
    EXPECT_DOUBLE_EQ(g[1], 1.25);
    EXPECT_EQ(parse_grid("3:3:1").size(), 1u);
    for (const char* bad : {"1:2", "1:2:0", "a:2:3", "1:2:3:4", "2:1:x"}) {
        EXPECT_THROW(parse_grid(bad), InputError) << bad;
    }
}

TEST(Presets, AllParseAndResolve) {
    ASSERT_FALSE(preset_names().empty());
    for (const auto& name : preset_names()) {
        const auto text = find_preset(name);
        ASSERT_TRUE(text.has_value());
        const TomlDoc doc = parse_toml(std::string(*text));
        const std::string cmd = std::get<std::string>(doc.root.at("command"));
        RunConfig cfg = RunConfig::defaults(command_spec(cmd));
        EXPECT_NO_THROW(cfg.merge(doc, command_spec(cmd), name)) << name;
    }
    EXPECT_FALSE(find_preset("no-such-preset").has_value());
}

// ---------------------------------------------------------------------------
// Records

TEST(Record, JsonRoundTrip) {
    ExperimentRecord r;
    r.version = "1.2.3";
    r.command = "mle";
    r.master_seed = 18446744073709551615ULL;
    r.config_toml = "command = \"mle\"\n";
    r.wall_clock_seconds = 0.125;
    r.created_utc = "2026-01-01T00:00:00Z";
    r.counts = {{"a", 10, 3}, {"b", 1000000, 0}};
    r.output_digest = digest("x");
    const ExperimentRecord back = ExperimentRecord::from_json(r.to_json());
    EXPECT_EQ(back.master_seed, r.master_seed);
    EXPECT_EQ(back.counts, r.counts);
    EXPECT_EQ(back.config_toml, r.config_toml);
    EXPECT_EQ(back.to_json(), r.to_json());
    EXPECT_THROW(ExperimentRecord::from_json("{}"), InputError);
    EXPECT_THROW(ExperimentRecord::from_json("not json"), InputError);
}

TEST(Digest, FnvReferenceValues) {
    EXPECT_EQ(digest(""), "cbf29ce484222325");
    EXPECT_EQ(digest("a"), "af63dc4c8601ec8c");
}

// ---------------------------------------------------------------------------
// Entry point

class RunTest : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("superres_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    int call(std::vector<std::string> args) {
        args.insert(args.begin(), "superres");
        std::vector<char*> argv;
        for (auto& a : args) {
            argv.push_back(a.data());
        }
        return run(static_cast<int>(argv.size()), argv.data());
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    static std::string slurp(const std::string& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

    fs::path dir_;
};

TEST_F(RunTest, FlagsOverrideConfigOverridePreset) {
    write("c.toml", "[noise-sweep]\nsigma_t = 2.0\nomega_r_t = [0.01]\n");
    ASSERT_EQ(call({"noise-sweep", "--preset", "floor-sweep", "--config", path("c.toml"), "--out", path("a.csv"),
                    "--record", path("a.json")}),
              0);
    const TomlDoc cfg = parse_toml(ExperimentRecord::load(path("a.json")).config_toml);
    const auto& t = cfg.tables.at("noise-sweep");
    EXPECT_EQ(std::get<double>(t.at("sigma_t")), 2.0);
    EXPECT_EQ(std::get<std::string>(t.at("grid")), "1e-10:1e-1:91");  // from the preset
    ASSERT_EQ(call({"noise-sweep", "--preset", "floor-sweep", "--config", path("c.toml"), "--sigma-t", "4", "--out",
                    path("b.csv"), "--record", path("b.json")}),
              0);
    const TomlDoc cfg2 = parse_toml(ExperimentRecord::load(path("b.json")).config_toml);
    EXPECT_EQ(std::get<double>(cfg2.tables.at("noise-sweep").at("sigma_t")), 4.0);
}

TEST_F(RunTest, ExitCodes) {
    EXPECT_EQ(call({"fisher-scan", "--out", path("f.csv")}), 0);
    EXPECT_EQ(slurp(path("f.csv")).rfind("delta_s_t,fisher_r,", 0), 0u);
    EXPECT_EQ(call({"fisher-scan", "--bogus", "1"}), 2);
    EXPECT_EQ(call({"mle", "--shots", "1000", "--replicates", "2"}), 2);  // no seed
    EXPECT_EQ(call({"fisher-scan", "--sigma-t", "abc"}), 2);
    EXPECT_EQ(call({"fisher-scan", "--format", "xml"}), 2);
    write("bad.toml", "[fisher-scan]\nsigmat = 1\n");
    EXPECT_EQ(call({"fisher-scan", "--config", path("bad.toml")}), 2);
    EXPECT_EQ(call({"fisher-scan", "--config", path("missing.toml")}), 2);
    EXPECT_EQ(call({}), 2);
}

TEST_F(RunTest, JsonFormatCarriesSummaryAndTable) {
    ASSERT_EQ(call({"fisher-scan", "--format", "json", "--delta-grid", "6:6.5:3", "--out", path("f.json")}), 0);
    const auto j = nlohmann::json::parse(slurp(path("f.json")));
    EXPECT_EQ(j.at("table").at("rows").size(), 3u);
    EXPECT_TRUE(j.at("summary").contains("peak_fisher_r"));
}

TEST_F(RunTest, ReplayReproducesCountsAcrossThreadCounts) {
    ASSERT_EQ(call({"mle", "--seed", "11", "--shots", "20000", "--replicates", "6", "--threads", "1", "--out",
                    path("m.csv"), "--record", path("m.json")}),
              0);
    EXPECT_FALSE(ExperimentRecord::load(path("m.json")).counts.empty());
    EXPECT_EQ(call({"record", "replay", path("m.json"), "--threads", "3"}), 0);
    EXPECT_EQ(replay_record(ExperimentRecord::load(path("m.json")), 2), "");

    ExperimentRecord tampered = ExperimentRecord::load(path("m.json"));
    tampered.counts.front().n_ones += 1;
    tampered.save(path("t.json"));
    EXPECT_EQ(call({"record", "replay", path("t.json")}), 3);
    EXPECT_NE(replay_record(tampered, 1), "");
}

TEST_F(RunTest, SameSeedSameBytes) {
    for (const char* name : {"x.csv", "y.csv"}) {
        ASSERT_EQ(call({"prob-scan", "--seed", "3", "--shots", "5000", "--sampler", "per-shot", "--out", path(name)}),
                  0);
    }
    EXPECT_EQ(slurp(path("x.csv")), slurp(path("y.csv")));
}

}  // namespace
}  // namespace superres::cli
