#pragma once

#include "harnack/convergence.hpp"
#include "harnack/elliptic.hpp"
#include "harnack/parabolic.hpp"

#include <string>
#include <vector>

namespace harnack {

/// Shortest decimal string that reads back to the same double; "nan",
/// "inf" and "-inf" for non-finite values.
std::string format_number(double value);

/// One elliptic verification with the parameters that produced it.
struct EllipticCase {
  std::string manifold;  // "torus" or "sphere"
  int dimension = 0;
  int resolution = 0;  // nodes per axis on the torus, subdivision level on the sphere
  std::string scenario;
  double b = 0.0;
  double ricci_K = 0.0;
  double delta = 0.0;
  EllipticReport report;
};

std::string elliptic_csv(const std::vector<EllipticCase>& cases);
std::string heat_csv(const std::vector<HeatTraceRecord>& records);
std::string convergence_csv(const ConvergenceTable& table);

// JSON documents, pretty-printed with a trailing newline.
std::string elliptic_json(const std::vector<EllipticCase>& cases);
std::string heat_json(const HeatRunResult& run, const std::string& scenario);
std::string convergence_json(const std::vector<ConvergenceTable>& tables);

} // namespace harnack
