#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cbody/error.hpp"
#include "cbody/field_io.hpp"
#include "cbody/scenario.hpp"

namespace cbody {

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw Error(ErrorCode::InvalidParameter, "cannot write " + p.string());
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_artifacts(const ScenarioConfig& cfg, const ScenarioResult& result) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.output.dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::InvalidParameter, "cannot create output directory " + dir.string());

  const MinimizeResult& mr = result.minimization;
  {
    auto out = open_out(dir / "trace.csv");
    out << "iter,energy,grad_norm\n";
    for (std::size_t i = 0; i < mr.energy_trace.size(); ++i) {
      out << i << ',' << num(mr.energy_trace[i]) << ',' << (i < mr.grad_trace.size() ? num(mr.grad_trace[i]) : "nan")
          << '\n';
    }
  }
  if (cfg.output.fields_csv) {
    write_u_csv((dir / "fields_u.csv").string(), mr.state, *result.grid);
    write_nu_csv((dir / "fields_nu.csv").string(), mr.state, *result.grid);
  }
  if (cfg.output.binary) write_binary((dir / "fields.cbfd").string(), mr.state, *result.grid);
  {
    auto out = open_out(dir / "report.txt");
    for (const auto& [k, v] : result.summary) out << k << ": " << v << '\n';
    for (const auto& c : result.checks) {
      if (!c.detail.empty()) out << "detail." << c.name << ": " << c.detail << '\n';
    }
  }
  {
    auto out = open_out(dir / "residuals.csv");
    out << "law,test,raw,scale,ratio\n";
    for (const auto& r : result.residuals) {
      out << r.law << ',' << r.test << ',' << num(r.raw) << ',' << num(r.scale) << ',' << num(r.ratio) << '\n';
    }
  }
}

}  // namespace cbody
