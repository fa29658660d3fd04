#include <doctest.h>

#include <filesystem>
#include <set>

#include "cfier/config.hpp"

using namespace cfier;

namespace {

const char* kBase = R"(
name = probe   # trailing comment
problem {
  side = interior
  k = 2
  geometry = square4
  sizes = [32, 64]
  impedance { type = constant; ik = 1 }
}
incidence { type = point_source; position = [4, 4] }
solver { tol = 1e-10; maxit = 50 }
)";

ExperimentConfig load(const std::string& text)
{
    return load_experiment(parse_config(text), "fallback", "/tmp/out");
}

std::string replace(std::string s, const std::string& from, const std::string& to)
{
    const auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    return s.replace(pos, from.size(), to);
}

} // namespace

TEST_CASE("parser: values, blocks, separators")
{
    const ConfigBlock b = parse_config("a = 1.5; s = \"x y\"\nflag = true\n"
                                       "l = [1, [2, 3],\n  word]\nblk {\n inner = -2e-3 }\n");
    CHECK(b.at("a").number("a") == 1.5);
    CHECK(b.at("s").string("s") == "x y");
    CHECK(b.at("flag").boolean("flag"));
    const ConfigList& l = b.at("l").list("l");
    REQUIRE(l.size() == 3);
    CHECK(l[1].complex("l") == cplx(2.0, 3.0));
    CHECK(l[2].string("l") == "word");
    CHECK(b.at("blk").block("blk").at("inner").number("inner") == -2e-3);
    CHECK(b.at("blk").line == 5);
    CHECK(parse_config("").empty());
}

TEST_CASE("parser: syntax errors carry line numbers")
{
    CHECK_THROWS_WITH_AS(parse_config("a = 1\na = 2"), doctest::Contains("line 2"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("blk {\n a = 1\n"), doctest::Contains("missing '}'"),
                         ConfigError);
    CHECK_THROWS_AS(parse_config("}"), ConfigError);
    CHECK_THROWS_AS(parse_config("a 1"), ConfigError);
    CHECK_THROWS_AS(parse_config("a = [1, 2"), ConfigError);
    CHECK_THROWS_AS(parse_config("a = \"open"), ConfigError);
    CHECK_THROWS_AS(parse_config("a = 1 2"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("a = 1").at("a").string("a"),
                         doctest::Contains("must be a string"), ConfigError);
}

TEST_CASE("experiment schema")
{
    const ExperimentConfig cfg = load(kBase);
    CHECK(cfg.name == "probe");
    CHECK(cfg.sizes == std::vector<int>{32, 64});
    CHECK(cfg.ks == std::vector<double>{2.0, 2.0});
    CHECK(cfg.tol == 1e-10);
    CHECK(cfg.maxit == 50);
    CHECK(cfg.csv == std::filesystem::path("/tmp/out/probe.csv"));
    const ProblemSpec p = cfg.problem_for(1);
    CHECK(p.n == 32);
    CHECK(p.regularizer().value() == cplx(2.0, 1.0));
    CHECK(std::get<ConstantImpedance>(p.impedance).zeta == cplx(0.0, 2.0));
    CHECK(std::holds_alternative<PointSource>(cfg.incidence));

    SUBCASE("unknown keys are rejected at every level")
    {
        CHECK_THROWS_WITH_AS(load(std::string(kBase) + "bogus = 1\n"),
                             doctest::Contains("unknown key bogus"), ConfigError);
        CHECK_THROWS_WITH_AS(load(replace(kBase, "side = interior", "side = interior; q = 3")),
                             doctest::Contains("problem.q"), ConfigError);
        CHECK_THROWS_WITH_AS(load(replace(kBase, "ik = 1", "ik = 1; extra = 2")),
                             doctest::Contains("problem.impedance.extra"), ConfigError);
    }
    SUBCASE("empty and malformed size lists")
    {
        CHECK_THROWS_WITH_AS(load(replace(kBase, "[32, 64]", "[]")), doctest::Contains("empty"),
                             ConfigError);
        CHECK_THROWS_AS(load(replace(kBase, "[32, 64]", "[33]")), ConfigError);
        CHECK_THROWS_AS(load(replace(kBase, "k = 2", "k = [1, 2, 3]")), ConfigError);
        CHECK_THROWS_AS(load(replace(kBase, "k = 2", "k = -2")), ConfigError);
    }
    SUBCASE("missing and inconsistent entries")
    {
        CHECK_THROWS_WITH_AS(load(replace(kBase, "side = interior", "")),
                             doctest::Contains("missing key problem.side"), ConfigError);
        CHECK_THROWS_AS(load(replace(kBase, "side = interior", "side = inside")), ConfigError);
        CHECK_THROWS_AS(load(replace(kBase, "ik = 1", "ik = 1; zeta = [0, 1]")), ConfigError);
        CHECK_THROWS_AS(load(replace(kBase, "type = constant; ik = 1", "type = piecewise; ik = [0, 1, 2, 3]")),
                        ConfigError); // piecewise needs the weighted formulation
        CHECK_THROWS_AS(load(replace(kBase, "tol = 1e-10", "tol = 2")), ConfigError);
        CHECK_THROWS_AS(load(replace(kBase, "geometry = square4", "geometry = hexagon")),
                        ConfigError);
        CHECK_THROWS_AS(load(replace(kBase, "geometry = square4", "geometry = 4")), ConfigError);
    }
}

TEST_CASE("wavenumber-dependent impedances are resolved per run")
{
    std::string text = replace(kBase, "k = 2", "k = [8, 16]");
    text = replace(text, "[32, 64]", "[192, 384]");
    text = replace(text, "type = constant; ik = 1", "type = transmission");
    text = replace(text, "side = interior", "side = exterior");
    const ExperimentConfig cfg = load(text);
    const auto& t = std::get<TransmissionImpedance>(cfg.problem_for(1).impedance);
    CHECK(t.kappa.value() == cplx(16.0, 1.0));
    CHECK(t.sign == 1);

    std::string pw = replace(kBase, "type = constant; ik = 1", "type = piecewise; ik = [0, 1, 2, 3]");
    pw = replace(pw, "sizes = [32, 64]", "sizes = [32, 64]\n  weighted = true");
    const ExperimentConfig pc = load(replace(pw, "k = 2", "k = 3"));
    const auto& z = std::get<PiecewiseImpedance>(pc.problem_for(0).impedance).zeta;
    CHECK(z == std::vector<cplx>{0.0, cplx(0, 3), cplx(0, 6), cplx(0, 9)});
    CHECK_THROWS_AS(load(replace(pw, "[0, 1, 2, 3]", "[0, 1]")), ConfigError);
}

TEST_CASE("explicit polygons and blended impedances")
{
    std::string text = replace(kBase, "geometry = square4",
                               "geometry = polygon\n  vertices = [[0, 0], [2, 0], [2, 2], [0, 2]]");
    text = replace(text, "[4, 4]", "[5, 5]");
    text = replace(text, "type = constant; ik = 1",
                   "type = blended; kappas = [[1, 1], [2, 1]]; patches = [[0, 1], [2, 3]]");
    const ExperimentConfig cfg = load(text);
    const auto& b = std::get<BlendedImpedance>(cfg.problem.impedance);
    CHECK(b.kappas.size() == 2);
    CHECK(b.patches[1] == std::vector<int>{2, 3});
    CHECK(cfg.problem.geometry.segments().size() == 4);
}

TEST_CASE("bundled configs load")
{
    int count = 0;
    std::set<int> tables;
    for (const auto& entry : std::filesystem::directory_iterator(CFIER_CONFIG_DIR)) {
        if (entry.path().extension() != ".cfg")
            continue;
        INFO(entry.path().string());
        const ExperimentConfig cfg = load_experiment(entry.path());
        CHECK(!cfg.sizes.empty());
        CHECK((cfg.tol == 1e-12 || cfg.tol == 1e-4));
        tables.insert(entry.path().filename().string()[5] - '0');
        ++count;
    }
    CHECK(tables == std::set<int>{1, 2, 3, 4, 5, 6, 7});
    const ExperimentConfig t1 = load_experiment(std::filesystem::path(CFIER_CONFIG_DIR) / "table1_square.cfg");
    CHECK(t1.sizes == std::vector<int>{32, 64, 128, 256, 512, 1024});
    CHECK(count >= 7);
}
