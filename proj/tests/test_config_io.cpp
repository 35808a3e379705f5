#include <gtest/gtest.h>

#include <random>
#include <sstream>
#include <string>

#include "tabla/builtin_profiles.hpp"
#include "tabla/config_io.hpp"

using namespace tabla;

namespace {

DensityProfile parse(const std::string& text) {
    std::istringstream in(text);
    return parse_profile(in);
}

void expect_same_density(const DensityProfile& a, const DensityProfile& b) {
    ASSERT_EQ(a.kind(), b.kind());
    ASSERT_EQ(a.radius(), b.radius());
    for (int i = 0; i <= 1000; ++i) {
        const double r = a.radius() * i / 1000.0;
        EXPECT_EQ(a.density(r), b.density(r)) << "r=" << r;
    }
}

}  // namespace

TEST(ProfileFile, AllVariants) {
    EXPECT_EQ(parse("variant = uniform\n").density(0.3), 1.0);
    const auto rings = parse("# two rings\nvariant = rings\nring = 0.4 5  # patch\nring = 1 1\n");
    EXPECT_EQ(rings.density(0.2), 5.0);
    EXPECT_EQ(rings.density(0.7), 1.0);
    const auto cont = parse("variant = continuous\na_log = 2\nb_log = 3\nr0 = 0.8\npatch_radius = 0.5\n"
                            "c_exp = 0.1\nd_exp = 1.5\n");
    EXPECT_DOUBLE_EQ(cont.density(0.0), 2.0 * std::log(0.8) + 3.0);
    const auto tab = parse("variant = tabulated\nradius = 2\nsample = 0 4\nsample = 2 1\n");
    EXPECT_DOUBLE_EQ(tab.density(1.0), 2.5);
}

TEST(ProfileFile, Errors) {
    EXPECT_THROW(parse("variant = rings\nring = 0.4\n"), ConfigError);
    EXPECT_THROW(parse("variant = rings\nring = 0.5 2\nring = 0.9 1\n"), ConfigError);
    EXPECT_THROW(parse("variant = spiral\n"), ConfigError);
    EXPECT_THROW(parse("radius = 1\n"), ConfigError);
    EXPECT_THROW(parse("variant = uniform\nradius = one\n"), ConfigError);
    EXPECT_THROW(parse("variant = uniform\ncolour = red\n"), ConfigError);
    try {
        parse("variant = uniform\n\nno equals sign\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
    EXPECT_THROW(load_profile("/nonexistent/profile"), ConfigError);
}

TEST(ProfileFile, WriteThenParseReproducesDensity) {
    for (const auto& name : builtin_profile_names()) {
        const auto p = *builtin_profile(name);
        std::ostringstream out;
        write_profile(out, p);
        expect_same_density(parse(out.str()), p);
    }
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Ring> rings;
        double r = 0.0;
        const int n = 1 + int(rng() % 4);
        for (int i = 0; i < n; ++i) {
            r += (1.0 - r) * (0.1 + 0.8 * double(rng() >> 11) * 0x1.0p-53);
            rings.push_back({r, 1.0 + 20.0 * double(rng() >> 11) * 0x1.0p-53});
        }
        rings.push_back({1.0, 1.0});
        const auto p = DensityProfile::step_rings(rings).scaled(3.0);
        std::ostringstream out;
        write_profile(out, p);
        expect_same_density(parse(out.str()), p);
    }
}

TEST(ProfileFile, ShippedDefaultsMatchBuiltins) {
    const std::string dir = std::string(TABLA_SOURCE_DIR) + "/config/";
    expect_same_density(load_profile(dir + "default-continuous.profile"), *builtin_profile("default-continuous"));
    expect_same_density(load_profile(dir + "default-rings.profile"), *builtin_profile("default-rings"));
}

TEST(TuneFile, ParsesShippedSpecs) {
    const std::string dir = std::string(TABLA_SOURCE_DIR) + "/config/";
    const auto cont = load_tune_spec(dir + "tune-continuous.tune");
    EXPECT_EQ(cont.problem.kind, ProfileTemplate::Continuous);
    EXPECT_EQ(cont.problem.params.size(), 6u);
    EXPECT_EQ(cont.problem.targets.size(), 9u);
    EXPECT_FALSE(cont.problem.targets[0].target.has_value());
    EXPECT_EQ(cont.problem.base_mode, (ModeId{1, 0}));
    EXPECT_EQ(cont.problem.budget, 500);
    EXPECT_EQ(cont.problem.search.h, 1e-3);
    EXPECT_EQ(cont.seed, 1u);
    const auto rings = load_tune_spec(dir + "tune-rings.tune");
    EXPECT_EQ(rings.problem.kind, ProfileTemplate::Rings);
    EXPECT_EQ(rings.problem.params.size(), 4u);
}

TEST(TuneFile, DefaultsAndErrors) {
    std::istringstream minimal("template = rings\n");
    const auto spec = parse_tune_spec(minimal);
    EXPECT_EQ(spec.problem.params.size(), default_ring_params().size());
    EXPECT_EQ(spec.problem.targets.size(), default_targets().size());
    for (const char* bad : {"param = a 0 1\ntemplate = rings\n", "template = spiral\n", "budget = 10\n",
                            "template = rings\ntarget = 1;0 2\n", "template = rings\nbase = x\n"}) {
        std::istringstream in(bad);
        EXPECT_THROW(parse_tune_spec(in), ConfigError) << bad;
    }
}
