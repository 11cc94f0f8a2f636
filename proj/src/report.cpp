#include "harnack/report.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <sstream>
#include <system_error>

namespace harnack {

namespace {

using nlohmann::ordered_json;

// nlohmann writes NaN as null; keep that explicit.
ordered_json number(double v) {
  if (std::isfinite(v))
    return v;
  return nullptr;
}

std::string join(std::initializer_list<std::string> cells) {
  std::string line;
  for (const auto& c : cells) {
    if (!line.empty())
      line += ',';
    line += c;
  }
  line += '\n';
  return line;
}

const char* refined_name(RefinedParameter p) {
  return p == RefinedParameter::space ? "space" : "time";
}

ordered_json max_point_json(const MaxPointMargins& m) {
  return {{"applicable", m.applicable},
          {"node", m.node},
          {"F", number(m.F)},
          {"mu", number(m.mu)},
          {"young_margin", number(m.young)},
          {"trace_margin", number(m.trace)},
          {"key1_margin", number(m.key1)},
          {"dropped_term", number(m.dropped_term)},
          {"large_F_case", m.large_F_case}};
}

} // namespace

std::string format_number(double value) {
  if (std::isnan(value))
    return "nan";
  if (std::isinf(value))
    return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  if (res.ec != std::errc())
    throw std::runtime_error("format_number: to_chars failed");
  return std::string(buf, res.ptr);
}

std::string elliptic_csv(const std::vector<EllipticCase>& cases) {
  std::string out = "manifold,n,N,b,K,delta,sup_Q,rhs,margin,holds,res_q,res_quot,res_solver\n";
  for (const auto& c : cases) {
    const auto& r = c.report;
    out += join({c.manifold, std::to_string(c.dimension), std::to_string(c.resolution),
                 format_number(c.b), format_number(c.ricci_K), format_number(c.delta),
                 format_number(r.sup_Q), format_number(r.rhs_general_b), format_number(r.margin),
                 r.holds ? "true" : "false", format_number(r.residual_q_identity),
                 format_number(r.residual_quotient_laplacian), format_number(r.residual_solver)});
  }
  return out;
}

std::string heat_csv(const std::vector<HeatTraceRecord>& records) {
  std::string out =
      "t,sup_F,z_index,mu,min_u,res_w,res_wt,res_quot_evo,res_quot_dt,res_F_evo,liyau_margin,"
      "young_margin,trace_margin,key1_margin\n";
  for (const auto& r : records)
    out += join({format_number(r.t), format_number(r.sup_F), std::to_string(r.z_index),
                 format_number(r.mu), format_number(r.min_u), format_number(r.res_w),
                 format_number(r.res_wt), format_number(r.res_quot_evo),
                 format_number(r.res_quot_dt), format_number(r.res_F_evo),
                 format_number(r.liyau_margin), format_number(r.young_margin),
                 format_number(r.trace_margin), format_number(r.key1_margin)});
  return out;
}

std::string convergence_csv(const ConvergenceTable& table) {
  std::string out = "level,N,dt,residual,order\n";
  for (const auto& r : table.rows)
    out += join({std::to_string(r.level), std::to_string(r.resolution), format_number(r.dt),
                 format_number(r.residual), format_number(r.order)});
  return out;
}

std::string elliptic_json(const std::vector<EllipticCase>& cases) {
  ordered_json doc = ordered_json::array();
  for (const auto& c : cases) {
    const auto& r = c.report;
    doc.push_back({{"manifold", c.manifold},
                   {"n", c.dimension},
                   {"N", c.resolution},
                   {"scenario", c.scenario},
                   {"b", c.b},
                   {"K", c.ricci_K},
                   {"delta", c.delta},
                   {"sup_Q", number(r.sup_Q)},
                   {"argmax", r.argmax},
                   {"rhs", number(r.rhs_general_b)},
                   {"margin", number(r.margin)},
                   {"holds", r.holds},
                   {"rhs_statement", number(r.rhs_theorem_statement)},
                   {"statement_margin", number(r.statement_margin)},
                   {"statement_holds", r.statement_holds},
                   {"res_q", number(r.residual_q_identity)},
                   {"res_quot", number(r.residual_quotient_laplacian)},
                   {"res_solver", number(r.residual_solver)}});
  }
  return doc.dump(2) + "\n";
}

std::string heat_json(const HeatRunResult& run, const std::string& scenario) {
  const auto& k = run.constants;
  ordered_json doc = {
      {"scenario", scenario},
      {"dimension", run.dimension},
      {"capability", run.capability},
      {"records", run.records.size()},
      {"space_time_sup_F", number(run.space_time_sup_F)},
      {"argmax_time", run.argmax_time},
      {"argmax_node", run.argmax_node},
      {"verdict_kind",
       "boundedness: sup F is finite and reported with the structural constants it may depend "
       "on; no explicit constant is checked"},
      {"structural_constants",
       {{"min_u", number(k.min_u)},
        {"sup_A", number(k.sup_A)},
        {"sup_grad_A", number(k.sup_grad_A)},
        {"sup_lap_A", number(k.sup_lap_A)},
        {"K", k.ricci_K},
        {"a", k.a},
        {"T", k.horizon}}},
  };
  doc["max_point"] = run.global_max_point ? max_point_json(*run.global_max_point) : nullptr;
  return doc.dump(2) + "\n";
}

std::string convergence_json(const std::vector<ConvergenceTable>& tables) {
  ordered_json doc = ordered_json::array();
  for (const auto& t : tables) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : t.rows)
      rows.push_back({{"level", r.level},
                      {"N", r.resolution},
                      {"dt", r.dt},
                      {"residual", number(r.residual)},
                      {"order", number(r.order)}});
    doc.push_back({{"check", t.check},
                   {"refines", refined_name(t.refines)},
                   {"expected_order", t.expected_order},
                   {"floor", t.floor},
                   {"converged", t.converged},
                   {"rows", rows}});
  }
  return doc.dump(2) + "\n";
}

} // namespace harnack
