#pragma once

// Function files, exact parameter parsing and JSON reports.

#include <cstdint>
#include <string>

#include <gmpxx.h>
#include <json.hpp>

#include "absparse/spectrum.hpp"
#include "absparse/tester.hpp"
#include "absparse/verify.hpp"

namespace absparse {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kReportSchema = "abspase-report/1";

/// "ABSPARSE v1", factor count, "p n" pairs, then one ±1 line per point in
/// lex order. Throws ParseError with the offending line.
DenseFunction parse_function_file(const std::string& text);
std::string serialize_function_file(const DenseFunction& f);

/// Exact value of "3", "-1/8", "0.125" or "1.5e-3".
mpq_class parse_rational(const std::string& text);

/// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string fnv1a_digest(const std::string& bytes);

nlohmann::ordered_json spectrum_json(const Spectrum& s);
nlohmann::ordered_json params_json(const TestParams& p);
nlohmann::ordered_json test_report_json(const TestReport& r);
nlohmann::ordered_json verification_json(const VerificationReport& r);

nlohmann::ordered_json envelope(const std::string& command, const std::string& digest, std::uint64_t seed,
                                nlohmann::ordered_json params, nlohmann::ordered_json payload);

}  // namespace absparse
