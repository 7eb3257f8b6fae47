#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>
#include <unistd.h>

#include "gkt4.h"

namespace {

std::string tmp(const char* name) { return "/tmp/gkt4_capi_" + std::to_string(::getpid()) + "_" + name; }

const int kDims[4] = {32, 32, 1, 1};

gkt4_state* deformed() {
  gkt4_state* flat = nullptr;
  REQUIRE(gkt4_state_flat(kDims, GKT4_DIFF_SPECTRAL, &flat) == GKT4_OK);
  gkt4_config* c = nullptr;
  REQUIRE(gkt4_config_parse("deform.t_end = 0.2\n", &c) == GKT4_OK);
  gkt4_state* out = nullptr;
  double reached = -1.0;
  REQUIRE(gkt4_deform(flat, c, &out, &reached) == GKT4_OK);
  CHECK(reached == doctest::Approx(0.2));
  gkt4_config_free(c);
  gkt4_state_free(flat);
  return out;
}

void step_counter(long, const gkt4_state*, void* user) { ++*static_cast<long*>(user); }

}  // namespace

TEST_CASE("state handles") {
  gkt4_state* s = nullptr;
  REQUIRE(gkt4_state_flat(kDims, GKT4_DIFF_SPECTRAL, &s) == GKT4_OK);
  gkt4_state_info info{};
  REQUIRE(gkt4_state_info_get(s, &info) == GKT4_OK);
  CHECK(info.dims[0] == 32);
  CHECK(info.valid == 1);
  CHECK(info.margin == doctest::Approx(1.0));
  CHECK(info.lambda == 0.0);
  const std::string path = tmp("flat.gkt4");
  REQUIRE(gkt4_state_save(s, path.c_str()) == GKT4_OK);
  gkt4_state* back = nullptr;
  REQUIRE(gkt4_state_load(path.c_str(), GKT4_DIFF_SPECTRAL, &back) == GKT4_OK);
  gkt4_state_info info2{};
  gkt4_state_info_get(back, &info2);
  CHECK(info2.margin == info.margin);
  gkt4_state_free(back);
  gkt4_state_free(s);
  std::remove(path.c_str());
  gkt4_state_free(nullptr);
}

TEST_CASE("status codes and messages") {
  gkt4_state* s = nullptr;
  const int bad[4] = {0, 1, 1, 1};
  CHECK(gkt4_state_flat(bad, GKT4_DIFF_SPECTRAL, &s) == GKT4_ERR_INVALID_ARGUMENT);
  CHECK(s == nullptr);
  CHECK(std::string(gkt4_last_error()).size() > 0);
  CHECK(gkt4_state_load("/nonexistent/x", GKT4_DIFF_SPECTRAL, &s) == GKT4_ERR_IO);
  CHECK(gkt4_state_flat(kDims, GKT4_DIFF_SPECTRAL, nullptr) == GKT4_ERR_INVALID_ARGUMENT);
  gkt4_config* c = nullptr;
  CHECK(gkt4_config_parse("bogus = 1\n", &c) == GKT4_ERR_CONFIG);
  CHECK(std::string(gkt4_last_error()).find("bogus") != std::string::npos);
  CHECK(std::string(gkt4_status_name(GKT4_ERR_POSITIVITY_LOSS)) == "PositivityLoss");
  CHECK(std::string(gkt4_version()).size() > 0);
  CHECK(std::string(gkt4_config_reference()).find("grid.dims") != std::string::npos);
}

TEST_CASE("config accessors") {
  gkt4_config* c = nullptr;
  REQUIRE(gkt4_config_parse("grid.dims = 8, 8, 1, 1\ndiff = fd4\noutput.csv = out.csv\ncheckpoint_stride = 5\n", &c) ==
          GKT4_OK);
  gkt4_config_info info{};
  REQUIRE(gkt4_config_info_get(c, &info) == GKT4_OK);
  CHECK(info.dims[1] == 8);
  CHECK(info.diff == GKT4_DIFF_FD4);
  CHECK(info.checkpoint_stride == 5);
  CHECK(std::string(gkt4_config_csv_out(c)) == "out.csv");
  CHECK(std::string(gkt4_config_snapshot_out(c)).empty());
  gkt4_config_free(c);
}

TEST_CASE("deform, verify and flow through the C interface") {
  gkt4_state* s = deformed();
  gkt4_report* r = nullptr;
  REQUIRE(gkt4_verify_field(s, 1e-6, nullptr, 0.0, &r) == GKT4_OK);
  CHECK(gkt4_report_passed(r) == 1);
  CHECK(gkt4_report_count(r) == 28);
  gkt4_check chk{};
  REQUIRE(gkt4_report_check(r, 0, &chk) == GKT4_OK);
  CHECK(std::string(chk.name) == "closed_omega");
  CHECK(gkt4_report_check(r, 99, &chk) == GKT4_ERR_INVALID_ARGUMENT);
  CHECK(std::string(gkt4_report_table(r)).find("overall PASS") != std::string::npos);
  gkt4_report_free(r);
  REQUIRE(gkt4_verify_field(s, 1e-6, "pluriclosed", 1e-3, &r) == GKT4_OK);
  CHECK(gkt4_report_passed(r) == 0);
  gkt4_report_free(r);

  gkt4_functionals fr{};
  REQUIRE(gkt4_functional_report(s, &fr) == GKT4_OK);
  CHECK(std::abs(fr.lambda) < 1e-8);
  CHECK(fr.dF_dt < 0.0);
  CHECK(fr.torsion_l2 > 0.0);

  gkt4_config* c = nullptr;
  REQUIRE(gkt4_config_parse("flow.t_end = 0.05\n", &c) == GKT4_OK);
  double dt = 0.0;
  REQUIRE(gkt4_flow_timestep(s, c, &dt) == GKT4_OK);
  long steps = 0;
  gkt4_trace* t = nullptr;
  REQUIRE(gkt4_flow(s, c, step_counter, &steps, &t) == GKT4_OK);
  gkt4_trace_info ti{};
  REQUIRE(gkt4_trace_info_get(t, &ti) == GKT4_OK);
  CHECK(ti.steps == steps);
  CHECK(ti.dt == dt);
  CHECK(ti.termination == GKT4_REACHED_END);
  CHECK(ti.has_final_state == 1);
  gkt4_row last{};
  REQUIRE(gkt4_trace_row(t, ti.rows - 1, &last) == GKT4_OK);
  CHECK(last.t == doctest::Approx(0.05));
  REQUIRE(gkt4_verify_flow(t, dt, nullptr, 0.0, &r) == GKT4_OK);
  CHECK(gkt4_report_passed(r) == 1);
  gkt4_report_free(r);

  const std::string csv = tmp("trace.csv");
  REQUIRE(gkt4_trace_write_csv(t, csv.c_str()) == GKT4_OK);
  gkt4_trace* loaded = nullptr;
  REQUIRE(gkt4_trace_load_csv(csv.c_str(), &loaded) == GKT4_OK);
  gkt4_trace_info li{};
  gkt4_trace_info_get(loaded, &li);
  CHECK(li.rows == ti.rows);
  CHECK(li.has_final_state == 0);
  gkt4_state* fin = nullptr;
  CHECK(gkt4_trace_final_state(loaded, &fin) == GKT4_ERR_PRECONDITION);
  REQUIRE(gkt4_trace_final_state(t, &fin) == GKT4_OK);
  gkt4_state_info fi{};
  gkt4_state_info_get(fin, &fi);
  CHECK(fi.t == doctest::Approx(0.05));
  gkt4_state_free(fin);
  gkt4_trace_free(loaded);
  gkt4_trace_free(t);
  gkt4_config_free(c);
  gkt4_state_free(s);
  std::remove(csv.c_str());
}

TEST_CASE("positivity loss is reported with the reached time") {
  gkt4_state* flat = nullptr;
  REQUIRE(gkt4_state_flat(kDims, GKT4_DIFF_SPECTRAL, &flat) == GKT4_OK);
  gkt4_config* c = nullptr;
  REQUIRE(gkt4_config_parse("generator.amplitude = 2\ndeform.t_end = 5\n", &c) == GKT4_OK);
  gkt4_state* out = nullptr;
  double reached = -1.0;
  CHECK(gkt4_deform(flat, c, &out, &reached) == GKT4_ERR_POSITIVITY_LOSS);
  CHECK(out == nullptr);
  CHECK(reached == doctest::Approx(0.99));
  gkt4_config_free(c);
  gkt4_state_free(flat);
}

TEST_CASE("pointwise battery") {
  gkt4_report* r = nullptr;
  REQUIRE(gkt4_verify_pointwise(7, 100, nullptr, 0.0, &r) == GKT4_OK);
  CHECK(gkt4_report_passed(r) == 1);
  CHECK(std::string(gkt4_report_rows(r)).rfind("suite,check,residual,threshold,pass\n", 0) == 0);
  gkt4_report_free(r);
  CHECK(gkt4_verify_pointwise(7, 0, nullptr, 0.0, &r) == GKT4_ERR_PRECONDITION);
}
