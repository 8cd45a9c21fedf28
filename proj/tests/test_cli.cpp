#include <cstdio>
#include <filesystem>
#include <fstream>

#include <unistd.h>

#include <gtest/gtest.h>

#include "cli.hpp"

namespace dualpredict::cli {
namespace {

using json = nlohmann::ordered_json;

class ModelFile {
 public:
  explicit ModelFile(const std::string& text) {
    path_ = (std::filesystem::temp_directory_path() /
             ("dualpredict_test_" + std::to_string(counter_++) + "_" + std::to_string(::getpid()) + ".json"))
                .string();
    std::ofstream(path_) << text;
  }
  ~ModelFile() { std::remove(path_.c_str()); }
  ModelFile(const ModelFile&) = delete;
  ModelFile& operator=(const ModelFile&) = delete;
  [[nodiscard]] const std::string& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::string path_;
};

RunConfig config_for(Command command, const std::string& path) {
  RunConfig c;
  c.command = command;
  c.model_path = path;
  return c;
}

TEST(ParseModel, AllVariants) {
  const ProcessModel arma = parse_model(json::parse(R"({"type":"arma","ar":[[0.5,0.1]],"ma":[0.2],"sigma2":2})"));
  ASSERT_NE(arma.arma(), nullptr);
  EXPECT_EQ(arma.arma()->ar()[0], Complex(0.5, 0.1));
  EXPECT_EQ(arma.arma()->ma()[0], Complex(0.2, 0.0));
  EXPECT_EQ(arma.arma()->sigma2(), 2.0);

  const ProcessModel acvf = parse_model(json::parse(R"({"type":"acvf","gamma":[[2,0],[0.5,0.25]]})"));
  EXPECT_EQ(autocovariance(acvf, -1), Complex(0.5, -0.25));

  const ProcessModel spectrum = parse_model(json::parse(R"({"type":"spectrum","values":[1,1,1,1,1]})"));
  EXPECT_NEAR(autocovariance(spectrum, 0).real(), 1.0, 1e-12);
}

TEST(ParseModel, Errors) {
  EXPECT_THROW((void)parse_model(json::parse(R"({"ar":[0.5]})")), ValidationError);
  EXPECT_THROW((void)parse_model(json::parse(R"({"type":"garch"})")), ValidationError);
  EXPECT_THROW((void)parse_model(json::parse(R"({"type":"arma","ar":[[0.5]]})")), ValidationError);
  EXPECT_THROW((void)parse_model(json::parse(R"({"type":"arma","ar":[1.2]})")), ValidationError);
  EXPECT_THROW((void)parse_model(json::parse(R"({"type":"arma","sigma":1})")), ValidationError);
  EXPECT_THROW((void)parse_model(json::parse(R"({"type":"acvf"})")), ValidationError);
  EXPECT_THROW((void)parse_model(json::parse(R"({"type":"spectrum","values":[1,-1,1]})")), ValidationError);
  try {
    (void)parse_model(json::parse(R"({"type":"arma","ma":[0.1,"x"]})"));
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("ma[1]"), std::string::npos);
  }
}

TEST(LoadModel, SyntaxErrorsNameTheLine) {
  const ModelFile file("{\"type\": \"arma\",\n \"ar\": [0.5,]}");
  try {
    (void)load_model(file.path());
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW((void)load_model("/nonexistent/model.json"), ValidationError);
}

TEST(RenderJson, SeventeenDigitsAndRoundTrip) {
  const json doc{{"x", 0.1}, {"list", json::array({1.0 / 3.0, 2})}, {"s", "a\"b"}, {"z", -0.0}};
  const std::string text = render_json(doc);
  EXPECT_NE(text.find("0.10000000000000001"), std::string::npos);
  EXPECT_NE(text.find("0.33333333333333331"), std::string::npos);
  EXPECT_NE(text.find("\"z\": 0"), std::string::npos);
  const json back = json::parse(text);
  EXPECT_EQ(back.at("x").get<double>(), 0.1);
  EXPECT_EQ(back.at("list")[0].get<double>(), 1.0 / 3.0);
  EXPECT_EQ(back.at("s").get<std::string>(), "a\"b");
}

TEST(Run, PredictWhiteNoise) {
  const ModelFile file(R"({"type":"arma","ar":[],"ma":[],"sigma2":1})");
  RunConfig c = config_for(Command::predict, file.path());
  c.m = 4;
  const RunOutcome outcome = run(c);
  ASSERT_EQ(outcome.exit_code, kOk) << outcome.artifact;
  const json report = json::parse(outcome.artifact);
  EXPECT_EQ(report.at("schema"), kSchema);
  EXPECT_EQ(report.at("result").at("sigma2").get<double>(), 1.0);
  for (const json& a : report.at("result").at("alpha")) {
    EXPECT_EQ(a[1].get<double>(), 0.0);
    EXPECT_EQ(a[2].get<double>(), 0.0);
  }
  EXPECT_EQ(report.at("status"), "ok");
}

TEST(Run, ConvergeNakazi) {
  const ModelFile file(R"({"type":"arma","ar":[0.5],"sigma2":1})");
  RunConfig c = config_for(Command::converge, file.path());
  c.problem = "nakazi";
  c.n = 1;
  const RunOutcome outcome = run(c);
  ASSERT_EQ(outcome.exit_code, kOk) << outcome.artifact;
  const json result = json::parse(outcome.artifact).at("result");
  EXPECT_TRUE(result.at("converged").get<bool>());
  EXPECT_NEAR(result.at("values").back()[1].get<double>(), 0.8, 1e-6);
}

TEST(Run, ConvergeProblems) {
  const ModelFile file(R"({"type":"arma","ar":[0.5],"sigma2":1})");
  RunConfig c = config_for(Command::converge, file.path());
  c.problem = "single-missing";
  c.u = 1;
  EXPECT_NEAR(json::parse(run(c).artifact).at("result").at("extrapolated").get<double>(), 1.25, 1e-9);
  c.problem = "wold";
  c.n = 2;
  EXPECT_NEAR(json::parse(run(c).artifact).at("result").at("extrapolated").get<double>(), 1.3125, 1e-9);
  c.problem = "nope";
  EXPECT_EQ(run(c).exit_code, kValidationFailure);
}

TEST(Run, ConvergenceFailureExitCode) {
  const ModelFile file(R"({"type":"arma","ma":[0.999]})");
  RunConfig c = config_for(Command::converge, file.path());
  c.problem = "nakazi";
  c.n = 0;
  c.tolerance = 1e-300;
  const RunOutcome outcome = run(c);
  EXPECT_EQ(outcome.exit_code, kConvergenceFailure);
  EXPECT_EQ(json::parse(outcome.artifact).at("status"), "convergence_failure");
}

TEST(Run, VerificationFailureExitCode) {
  const ModelFile file(R"({"type":"arma","ar":[0.5]})");
  RunConfig c = config_for(Command::predict, file.path());
  c.tolerance = 1e-300;
  c.missing = {-3};
  EXPECT_EQ(run(c).exit_code, kVerificationFailure);
}

TEST(Run, ValidationFailures) {
  const ModelFile file(R"({"type":"arma","ar":[0.5]})");
  RunConfig c = config_for(Command::predict, file.path());
  c.missing = {0};
  EXPECT_EQ(run(c).exit_code, kValidationFailure);
  c.missing = {40};
  EXPECT_EQ(run(c).exit_code, kValidationFailure);
  c.missing = {};
  c.m = -1;
  EXPECT_EQ(run(c).exit_code, kValidationFailure);
  c = config_for(Command::predict, "");
  EXPECT_EQ(run(c).exit_code, kValidationFailure);
  const ModelFile singular(R"({"type":"acvf","gamma":[1,1,1]})");
  c = config_for(Command::dual, singular.path());
  c.m = 1;
  c.n = 1;
  EXPECT_EQ(run(c).exit_code, kValidationFailure);
}

TEST(Run, DualPairsAndCsv) {
  const ModelFile file(R"({"type":"arma","ar":[0.5]})");
  RunConfig c = config_for(Command::dual, file.path());
  c.m = 1;
  c.n = 1;
  c.pairs = {{0, 0}, {1, -1}};
  c.format = Format::csv;
  const RunOutcome outcome = run(c);
  ASSERT_EQ(outcome.exit_code, kOk) << outcome.artifact;
  EXPECT_EQ(outcome.artifact.rfind("field,index,re,im\n", 0), 0u);
  EXPECT_NE(outcome.artifact.find("entries,0:0,1.25"), std::string::npos) << outcome.artifact;
  EXPECT_NE(outcome.artifact.find("entries,1:-1,"), std::string::npos);
}

TEST(Run, InterpolateShiftsTarget) {
  const ModelFile file(R"({"type":"arma","ar":[0.5]})");
  RunConfig c = config_for(Command::interpolate, file.path());
  c.m = 16;
  c.target = 5;
  c.missing = {6};
  const json shifted = json::parse(run(c).artifact).at("result");
  c.target = 0;
  c.missing = {1};
  const json centred = json::parse(run(c).artifact).at("result");
  EXPECT_EQ(shifted.at("sigma2"), centred.at("sigma2"));
  EXPECT_EQ(shifted.at("coefficients")[0][0].get<long>(), centred.at("coefficients")[0][0].get<long>() + 5);
}

TEST(Run, VerifyIsDeterministic) {
  RunConfig c;
  c.command = Command::verify;
  c.instances = 20;
  const RunOutcome first = run(c);
  const RunOutcome second = run(c);
  ASSERT_EQ(first.exit_code, kOk) << first.artifact;
  EXPECT_EQ(first.artifact, second.artifact);
  const json report = json::parse(first.artifact);
  EXPECT_TRUE(report.at("result").at("passed").get<bool>());
  c.seed = 7;
  EXPECT_NE(run(c).artifact, first.artifact);
}

}  // namespace
}  // namespace dualpredict::cli
