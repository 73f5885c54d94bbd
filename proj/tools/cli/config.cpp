#include "cli/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace cyclewalk::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

double parse_real(std::string_view text, std::string_view what) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw UsageError("invalid " + std::string(what) + " '" + s + "'");
  }
  return v;
}

int parse_int(std::string_view text, std::string_view what) {
  const std::string s = trim(text);
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw UsageError("invalid " + std::string(what) + " '" + s + "'");
  }
  return v;
}

// A real number with optional sign, decimals and exponent; returns the
// length consumed, 0 if none.
std::size_t scan_real(std::string_view s) {
  double v = 0.0;
  std::size_t offset = (!s.empty() && s[0] == '+') ? 1 : 0;
  const auto res = std::from_chars(s.data() + offset, s.data() + s.size(), v);
  if (res.ec != std::errc()) return 0;
  return static_cast<std::size_t>(res.ptr - s.data());
}

}  // namespace

std::vector<int> parse_d_range(std::string_view text) {
  const auto sep = text.find("..");
  if (sep == std::string_view::npos) throw UsageError("--d-range expects A..B");
  const int a = parse_int(text.substr(0, sep), "cycle size");
  const int b = parse_int(text.substr(sep + 2), "cycle size");
  if (a > b) throw UsageError("--d-range is empty");
  if (a < 2) throw UsageError("cycle size must be at least 2");
  std::vector<int> out;
  for (int d = a; d <= b; ++d) out.push_back(d);
  return out;
}

std::vector<double> parse_phi_grid(std::string_view text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos) throw UsageError("--phi-grid expects start:step:end");
  const double start = parse_real(text.substr(0, c1), "phi grid start");
  const double step = parse_real(text.substr(c1 + 1, c2 - c1 - 1), "phi grid step");
  const double end = parse_real(text.substr(c2 + 1), "phi grid end");
  if (!(step > 0.0)) throw UsageError("--phi-grid step must be positive");
  if (end < start) throw UsageError("--phi-grid is empty");
  const auto count = static_cast<std::int64_t>(std::floor((end - start) / step + 1e-9)) + 1;
  if (count > 1000000) throw UsageError("--phi-grid has too many points");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) {
    // Snap to 12 decimals so 0:0.1:0.3 yields 0.3 rather than 0.30000000000000004.
    const double v = std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12;
    if (!(v >= 0.0 && v < 8.0)) throw UsageError("phi grid values must lie in [0, 8)");
    out.push_back(v);
  }
  return out;
}

Complex parse_complex(std::string_view text) {
  std::string s;
  for (char ch : text) {
    if (ch != ' ' && ch != '\t') s += ch;
  }
  if (s.empty()) throw UsageError("empty complex literal");
  const auto bad = [&] { return UsageError("invalid complex literal '" + s + "'"); };

  if (s.back() != 'i' && s.back() != 'j') {
    return Complex(parse_real(s, "complex literal"), 0.0);
  }
  const std::string body = s.substr(0, s.size() - 1);
  // Pure imaginary: "", "+", "-", or a single real.
  if (body.empty() || body == "+") return Complex(0.0, 1.0);
  if (body == "-") return Complex(0.0, -1.0);
  if (scan_real(body) == body.size()) return Complex(0.0, parse_real(body, "complex literal"));

  // Split at the sign separating real and imaginary parts, skipping exponents.
  std::size_t split = std::string::npos;
  for (std::size_t i = 1; i < body.size(); ++i) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') split = i;
  }
  if (split == std::string::npos) throw bad();
  const double re = parse_real(body.substr(0, split), "complex literal");
  const std::string im = body.substr(split);
  if (im == "+") return Complex(re, 1.0);
  if (im == "-") return Complex(re, -1.0);
  if (scan_real(im) != im.size()) throw bad();
  return Complex(re, parse_real(im[0] == '+' ? im.substr(1) : im, "complex literal"));
}

ResolvedState parse_state(std::string_view text) {
  if (auto named = parse_named_state(text)) {
    return ResolvedState{std::string(text), named_coin(*named), std::nullopt};
  }
  constexpr std::string_view kCustom = "custom:";
  if (text.substr(0, kCustom.size()) != kCustom) {
    throw UsageError("unknown state '" + std::string(text) +
                     "' (expected psi_a|psi_b|psi_c|psi_d|custom:z0,z1,z2,z3)");
  }
  std::vector<Complex> parts;
  std::string_view rest = text.substr(kCustom.size());
  while (true) {
    const auto comma = rest.find(',');
    parts.push_back(parse_complex(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  if (parts.size() != 4) throw UsageError("custom state needs exactly four components");
  Coin4 v(parts[0], parts[1], parts[2], parts[3]);
  const double norm = v.norm();
  if (!(norm > 0.0)) throw UsageError("custom state is the zero vector");
  ResolvedState out{std::string(text), v / norm, std::nullopt};
  if (std::abs(norm - 1.0) > 1e-6) {
    out.warning = "custom state had norm " + format_shortest(norm) + "; normalized";
  }
  return out;
}

Format parse_format(std::string_view text) {
  if (text == "csv") return Format::Csv;
  if (text == "json") return Format::Json;
  throw UsageError("unknown format '" + std::string(text) + "' (expected csv|json)");
}

Model parse_model(std::string_view text) {
  if (text == "recycled") return Model::Recycled;
  if (text == "memory") return Model::Memory;
  throw UsageError("unknown model '" + std::string(text) + "' (expected recycled|memory)");
}

int resolve_jobs(std::optional<int> flag) {
  if (flag) {
    if (*flag < 1) throw UsageError("--jobs must be at least 1");
    return *flag;
  }
  if (const char* env = std::getenv("CYCLEWALK_JOBS"); env != nullptr && *env != '\0') {
    const int v = parse_int(env, "CYCLEWALK_JOBS value");
    if (v < 1) throw UsageError("CYCLEWALK_JOBS must be at least 1");
    return v;
  }
  return static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
}

}  // namespace cyclewalk::cli
