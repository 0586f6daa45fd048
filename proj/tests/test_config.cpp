#include <gtest/gtest.h>

#include <filesystem>

#include "spectra_lab/config.hpp"
#include "spectra_lab/instances.hpp"

using namespace spectra_lab;
namespace inst = spectra_lab::instances;

namespace {

const char* kEquip = R"(# F_5 + {v >= 1}
[ring]
kind = "d_plus"
label = "E:equip"
field = "p=5,k=2"
group = "rat_lex:1"
subfield = "prime"
monomials = ["0"]
ideal = ">= 1"

[sampler]
seed = "0xD1V1DED"
samples = 1000

[checks]
run = ["all"]
)";

int error_line(const std::string& text) {
    try {
        parse_ring(text);
    } catch (const parse_error& e) {
        return e.line;
    }
    return -1;
}

} // namespace

TEST(Config, ParsesTheEquipExample) {
    auto cfg = parse_ring(kEquip);
    EXPECT_EQ(cfg.ring.label, "E:equip");
    EXPECT_EQ(describe(cfg.ring), describe(inst::equip()));
    EXPECT_EQ(ring_compare(cfg.ring, inst::equip()).rel, CompareResult::Relation::Equal);
    EXPECT_EQ(cfg.sampler.seed, acceptance_seed);
    EXPECT_EQ(cfg.samples, 1000u);
    EXPECT_EQ(cfg.checks, check_names());
}

TEST(Config, SeedTextHashes) {
    EXPECT_EQ(parse_seed("0xD1V1DED"), acceptance_seed);
    EXPECT_EQ(parse_seed("42"), 42u);
    EXPECT_EQ(parse_seed("0x10"), 16u);
}

TEST(Config, NegativeCutIsRejected) {
    std::string text = kEquip;
    text.replace(text.find("ideal = \">= 1\""), 14, "ideal = \">= -1\"");
    EXPECT_THROW(parse_ring(text), parse_error);
    EXPECT_EQ(error_line(text), 9);
}

TEST(Config, PadicNeedsAnOddPrime) {
    EXPECT_THROW(parse_ring("[ring]\nkind = \"padic_d\"\np = 2\n"), parse_error);
    EXPECT_THROW(parse_ring("[ring]\nkind = \"padic_d\"\np = 9\n"), parse_error);
    auto ok = parse_ring("[ring]\nkind = \"padic_d\"\np = 7\nprecision = 12\n");
    EXPECT_EQ(ambient_of(ok.ring).prec2(), 12);
}

TEST(Config, UnknownKeysAndSectionsCarryLocations) {
    std::string text = "[ring]\nkind = \"valuation\"\ngroup = \"int_lex:2\"\ncolour = \"red\"\n";
    EXPECT_EQ(error_line(text), 4);
    std::string head = "[ring]\nkind = \"valuation\"\ngroup = \"int_lex:1\"\n";
    EXPECT_EQ(error_line(head + "[extra]\n"), 4);
    EXPECT_THROW(parse_ring("[sampler]\nseed = 1\n"), parse_error);
    EXPECT_EQ(error_line(head + "[checks]\nrun = [\"divided\", \"nope\"]\n"), 5);
    EXPECT_EQ(error_line(head + "monomials = [\"0\"]\n"), 4);
    EXPECT_EQ(error_line("[ring]\nkind = \"valuation\"\n"), 1);
    EXPECT_EQ(error_line(head + "[ring]\n"), 4);
}

TEST(Config, SyntaxErrors) {
    EXPECT_THROW(parse_ring("[ring\nkind = \"valuation\"\n"), parse_error);
    EXPECT_THROW(parse_ring("[ring]\nkind = valuation\n"), parse_error);
    EXPECT_THROW(parse_ring("[ring]\nkind = \"valuation\"\nkind = \"valuation\"\n"), parse_error);
}

TEST(Config, RoundTrip) {
    for (auto& r : inst::all()) {
        RingConfig cfg{r, {}, 250, 6, {"divided", "nipp"}};
        auto back = parse_ring(serialize(cfg));
        EXPECT_EQ(describe(back.ring), describe(r)) << r.label;
        EXPECT_EQ(back.ring.label, r.label);
        EXPECT_EQ(back.samples, 250u);
        EXPECT_EQ(back.n_max, 6);
        EXPECT_EQ(back.checks, cfg.checks);
    }
}

TEST(Config, ShippedRingFilesLoad) {
    std::filesystem::path dir = std::filesystem::path(SPECTRA_LAB_SOURCE_DIR) / "rings";
    int n = 0;
    for (auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.path().extension() != ".toml") continue;
        EXPECT_NO_THROW(load_ring(e.path().string())) << e.path();
        ++n;
    }
    EXPECT_GE(n, 10);
}

TEST(Config, MissingFileIsParseError) { EXPECT_THROW(load_ring("/nonexistent/ring.toml"), parse_error); }
