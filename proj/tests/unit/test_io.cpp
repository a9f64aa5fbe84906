#include <gtest/gtest.h>

#include <sstream>

#include "lsvwip/io.hpp"
#include "test_util.hpp"

using namespace lsvwip;

namespace {

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

}  // namespace

TEST(StepPathCsv, Layout) {
    const StepPath g(1.0, 0.0, {0.5}, {1.0});
    std::ostringstream out;
    write_step_path_csv(out, g);
    EXPECT_EQ(out.str(), "T,initial_value\n1,0\nbreakpoint,value\n0.5,1\n");
}

TEST(StepPathCsv, RoundTripIsIdentity) {
    Rng rng(77);
    for (int i = 0; i < 200; ++i) {
        const StepPath g = random_step_path(rng, 0.5 + rng.uniform() * 3.0, 12);
        std::ostringstream out;
        write_step_path_csv(out, g);
        std::istringstream in(out.str());
        const StepPath back = read_step_path_csv(in);
        ASSERT_EQ(back, g) << out.str();
        std::ostringstream again;
        write_step_path_csv(again, back);
        ASSERT_EQ(again.str(), out.str());
    }
}

TEST(StepPathCsv, FileRoundTripAndFixture) {
    const auto dir = test::scratch_dir("io_roundtrip");
    const StepPath g(2.0, -0.25, {0.1, 1.0 / 3.0, 2.0}, {1e-300, -7.5, 0.0});
    save_step_path_csv(dir / "g.csv", g);
    EXPECT_EQ(load_step_path_csv(dir / "g.csv"), g);
    const StepPath u = load_step_path_csv(test::fixture("unit_jump.csv"));
    EXPECT_EQ(u, StepPath(1.0, 0.0, {0.5}, {1.0}));
    EXPECT_THROW(load_step_path_csv(dir / "missing.csv"), ValidationError);
}

TEST(StepPathCsv, AcceptsCrlf) {
    std::istringstream in("T,initial_value\r\n1,0\r\nbreakpoint,value\r\n0.5,1\r\n");
    EXPECT_EQ(read_step_path_csv(in), StepPath(1.0, 0.0, {0.5}, {1.0}));
}

TEST(StepPathCsv, MalformedInputNamesTheLine) {
    const auto expect_error = [](const std::string& text, const std::string& fragment) {
        std::istringstream in(text);
        try {
            read_step_path_csv(in);
            ADD_FAILURE() << "accepted: " << text;
        } catch (const ValidationError& e) {
            EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
        }
    };
    expect_error("", "line 1");
    expect_error("T,init\n1,0\nbreakpoint,value\n", "line 1");
    expect_error("T,initial_value\n1\nbreakpoint,value\n", "line 2");
    expect_error("T,initial_value\n1,0\nbp,value\n", "line 3");
    expect_error("T,initial_value\n1,0\nbreakpoint,value\n0.5,abc\n", "line 4");
    expect_error("T,initial_value\n1,0\nbreakpoint,value\n0.5,1\n0.4,2\n", "line 5");
    expect_error("T,initial_value\n1,0\nbreakpoint,value\n1.5,1\n", "line 4");
    std::ifstream bad(test::fixture("malformed.csv"));
    EXPECT_THROW(read_step_path_csv(bad), ValidationError);
}

TEST(StepPathCsv, RejectsShiftedDomain) {
    std::ostringstream out;
    EXPECT_THROW(write_step_path_csv(out, StepPath(2.0, 0.0, {1.5}, {1.0}, 1.0)), ValidationError);
}

TEST(OtherCsv, Headers) {
    DensityEstimate d;
    d.bin_edges = {0.0, 0.5, 1.0};
    d.masses = {0.75, 0.25};
    std::ostringstream dens;
    write_density_csv(dens, d);
    EXPECT_EQ(dens.str(), "bin_left,bin_right,mass\n0,0.5,0.75\n0.5,1,0.25\n");

    ExcursionSummary e;
    e.start = 0.75;
    e.return_time = 1;
    e.induced_value = -0.5;
    e.phi_star = 0.0;
    e.direction = Direction::Tie;
    std::ostringstream exc;
    write_excursions_csv(exc, {e});
    EXPECT_EQ(first_line(exc.str()), "y,r,Phi,PhiStar,direction");
    EXPECT_NE(exc.str().find("0.75,1,-0.5,0,"), std::string::npos);

    std::ostringstream part;
    write_partition_csv(part, return_partition(MapSpec::lsv(0.6), 5));
    EXPECT_EQ(first_line(part.str()), "n,left,right,measure_estimate");
    EXPECT_EQ(part.str().find('\r'), std::string::npos);
}

TEST(OtherCsv, TableQuoting) {
    Table t{"t", {"name", "note"}, {}};
    t.add_row({"a,b", "say \"hi\""});
    std::ostringstream out;
    write_table_csv(out, t);
    EXPECT_EQ(out.str(), "name,note\n\"a,b\",\"say \"\"hi\"\"\"\n");
}

TEST(Json, MetricResultAndStableLaw) {
    const Json m = to_json(MetricResult{0.25, 0.5, 1e-6});
    EXPECT_EQ(m.dump(), R"({"lower":0.25,"upper":0.5,"tolerance":1e-06})");
    StableLaw law;
    law.alpha = 1.6;
    law.c = 0.3;
    law.skew_sign = -1;
    const Json j = to_json(law);
    EXPECT_EQ(j.dump(), R"({"alpha":1.6,"c":0.3,"skew_sign":-1})");
    const StableLaw back = stable_law_from_json(j);
    EXPECT_EQ(back.alpha, law.alpha);
    EXPECT_EQ(back.c, law.c);
    EXPECT_EQ(back.skew_sign, law.skew_sign);
    EXPECT_THROW(stable_law_from_json(Json{{"alpha", 2.5}, {"c", 1.0}, {"skew_sign", 1}}), DomainError);
    EXPECT_THROW(stable_law_from_json(Json{{"alpha", 1.5}}), ValidationError);
}
