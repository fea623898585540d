#include "arp/corpus.hpp"
#include "arp/trace_io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace arp;

namespace {

SolveReport sample_report() {
  const auto e = make_rosenbrock(2);
  auto config = SolveConfig::for_order(2, 3.0, 1e-5);
  config.gamma2 = 7.0;
  config.subsolver.trial_steplength = TrialSteplength::WarmStart;
  return run(*e.problem, e.meta, FeasibleSet::box(Vector::Constant(2, -2.0), Vector::Constant(2, 3.0)),
             e.default_start, config);
}

void expect_same_bits(double a, double b, const char* what) {
  if (std::isnan(a)) {
    EXPECT_TRUE(std::isnan(b)) << what;
  } else {
    EXPECT_EQ(a, b) << what;
  }
}

std::string roundtrip_text(const SolveReport& report) {
  std::ostringstream out;
  write_trace(out, report);
  return out.str();
}

}  // namespace

TEST(TraceIo, RoundTripIsExact) {
  const auto report = sample_report();
  ASSERT_FALSE(report.iterations.empty());
  std::istringstream in(roundtrip_text(report));
  const auto back = read_trace(in);

  EXPECT_EQ(back.problem, report.problem);
  EXPECT_EQ(back.dimension, report.dimension);
  EXPECT_EQ(back.status, report.status);
  EXPECT_EQ(back.final_point, report.final_point);
  EXPECT_EQ(back.final_value, report.final_value);
  EXPECT_EQ(back.final_criticality, report.final_criticality);
  EXPECT_EQ(back.counters, report.counters);
  EXPECT_EQ(back.successful_count, report.successful_count);
  EXPECT_EQ(back.set.kind(), "box");
  EXPECT_EQ(back.config.gamma2, 7.0);
  EXPECT_EQ(back.config.theta, report.config.theta);
  EXPECT_EQ(back.config.subsolver.trial_steplength, TrialSteplength::WarmStart);
  ASSERT_EQ(back.iterations.size(), report.iterations.size());
  for (size_t k = 0; k < report.iterations.size(); ++k) {
    const auto& a = report.iterations[k];
    const auto& b = back.iterations[k];
    EXPECT_EQ(a.index, b.index);
    EXPECT_EQ(a.sigma, b.sigma);
    EXPECT_EQ(a.point, b.point);
    EXPECT_EQ(a.step, b.step);
    EXPECT_EQ(a.step_norm, b.step_norm);
    EXPECT_EQ(a.rho, b.rho);
    EXPECT_EQ(a.pi_f_trial, b.pi_f_trial);
    EXPECT_EQ(a.model_decrease, b.model_decrease);
    EXPECT_EQ(a.actual_decrease, b.actual_decrease);
    EXPECT_EQ(a.step_length_test, b.step_length_test);
    EXPECT_EQ(a.classification, b.classification);
    EXPECT_EQ(a.counters, b.counters);
  }
  // Writing the reloaded report reproduces the bytes.
  EXPECT_EQ(roundtrip_text(back), roundtrip_text(report));
}

TEST(TraceIo, NonFiniteRealsBecomeNull) {
  auto report = sample_report();
  report.beta = std::nan("");
  report.iterations.front().rho = std::numeric_limits<double>::infinity();
  const auto text = roundtrip_text(report);
  EXPECT_NE(text.find("\"beta\":null"), std::string::npos);
  std::istringstream in(text);
  const auto back = read_trace(in);
  expect_same_bits(back.beta, report.beta, "beta");
  EXPECT_TRUE(std::isnan(back.iterations.front().rho));
}

TEST(TraceIo, EmptyInputIsRejected) {
  std::istringstream in("");
  EXPECT_THROW(read_trace(in), TraceFormatError);
  std::istringstream blank("\n  \n");
  EXPECT_THROW(read_trace(blank), TraceFormatError);
}

TEST(TraceIo, MalformedLineNamesTheLine) {
  const auto text = roundtrip_text(sample_report());
  const auto second = text.find('\n') + 1;
  std::string broken = text.substr(0, second) + "{not json\n" + text.substr(second);
  std::istringstream in(broken);
  try {
    read_trace(in);
    FAIL() << "expected TraceFormatError";
  } catch (const TraceFormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(TraceIo, MissingFieldIsReported) {
  std::istringstream in(R"({"type":"header","problem":"x"})");
  try {
    read_trace(in);
    FAIL() << "expected TraceFormatError";
  } catch (const TraceFormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("dimension"), std::string::npos) << e.what();
  }
}

TEST(TraceIo, IterationCountMismatch) {
  const auto text = roundtrip_text(sample_report());
  const auto cut = text.rfind('\n', text.size() - 2);
  std::istringstream in(text.substr(0, cut + 1));
  EXPECT_THROW(read_trace(in), TraceFormatError);
}

TEST(TraceIo, HeaderMustComeFirst) {
  const auto text = roundtrip_text(sample_report());
  const auto second = text.find('\n') + 1;
  std::istringstream in(text.substr(second));
  EXPECT_THROW(read_trace(in), TraceFormatError);
}

TEST(TraceIo, MissingFile) {
  EXPECT_THROW(read_trace_file("/nonexistent/trace.jsonl"), TraceFormatError);
}

TEST(TraceIo, SummaryCsv) {
  const auto report = sample_report();
  const auto header = summary_csv_header();
  EXPECT_EQ(header,
            "problem,n,p,r,beta,epsilon,status,iterations,successful,unsuccessful,evals_value,"
            "evals_gradient,evals_high_order,final_criticality,final_value\n");
  const auto row = summary_csv_row(report);
  EXPECT_EQ(row.back(), '\n');
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), std::count(header.begin(), header.end(), ','));
  EXPECT_EQ(row.rfind("rosenbrock-2,2,2,3,1,1e-05,Converged,", 0), 0u) << row;
  EXPECT_EQ(summary_csv_row(report), row);
  std::int64_t captures = 1;
  for (const auto& rec : report.iterations) {
    if (is_successful(rec.classification) && !rec.terminated_here) ++captures;
  }
  EXPECT_EQ(high_order_evaluations(report), captures);
}
