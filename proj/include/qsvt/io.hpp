#pragma once
// File formats of the toolkit (all errors surface as ValidationError):
//   - coefficient CSV: header `k,c_k,chat_k`, 17 significant digits
//     (c_k = raw pre-averaging coefficient when known, else chat_k)
//   - polynomial JSON sidecar: {degree, parity, l1_norm, params}
//   - function-spec JSON: {"kind":"sign","delta":..,"eps":..} etc.
//   - matrix / encoding JSON: row-major [re, im] pairs with
//     {dim, s, a, alpha, eps} metadata
//   - circuit JSON: {"n": int, "gates": [{"g","q",("theta"|"matrix")}]}
//   - instance JSON: {"q0","q1","outputs","alpha","beta","g"}
//   - outcome JSON: {"estimate","decision","schedule","diagnostics"}

#include <map>
#include <string>
#include <vector>

#include "qsvt/chebyshev.hpp"
#include "qsvt/encoding.hpp"
#include "qsvt/simulator.hpp"
#include "qsvt/state_testing.hpp"
#include "qsvt/targets.hpp"

namespace qsvt {

// Round-trip-safe decimal rendering (17 significant digits).
std::string format_double(double v);

void write_poly_csv(const std::string& path, const ChebyshevPoly& p);
ChebyshevPoly read_poly_csv(const std::string& path);

void write_poly_sidecar(const std::string& path, const ChebyshevPoly& p,
                        const std::map<std::string, double>& params);

TargetFunction read_target_function(const std::string& path);

// Encoding JSON carries the encoded operator (the alpha-scaled block); the
// reader rebuilds an exact dilation of entries/alpha and re-attaches the
// declared alpha and eps.
void write_encoding_json(const std::string& path, const BlockEncoding& e);
BlockEncoding read_encoding_json(const std::string& path);

Circuit circuit_from_json_text(const std::string& text);
StateTestInstance read_instance_json(const std::string& path);

std::string outcome_to_json(const TestOutcome& out,
                            const std::map<std::string, double>& extra = {});

}  // namespace qsvt
