#include "gsvt/penalty_spec.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <optional>

#include "gsvt/errors.hpp"

namespace gsvt {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void fail(std::string_view spec, std::string_view token,
                       std::string_view why) {
  throw DomainError("invalid penalty spec '" + std::string(spec) + "': " +
                    std::string(why) + " at token '" + std::string(token) + "'");
}

PenaltyFamily parse_family(std::string_view spec, std::string_view token) {
  const std::string name = lower(trim(token));
  if (name == "l1") return PenaltyFamily::L1;
  if (name == "lp") return PenaltyFamily::Lp;
  if (name == "scad") return PenaltyFamily::Scad;
  if (name == "logarithm" || name == "log") return PenaltyFamily::Logarithm;
  if (name == "mcp") return PenaltyFamily::Mcp;
  if (name == "geman") return PenaltyFamily::Geman;
  if (name == "laplace") return PenaltyFamily::Laplace;
  fail(spec, token, "unknown penalty family");
}

double parse_number(std::string_view spec, std::string_view token,
                    std::string_view text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (t.empty() || ec != std::errc() || ptr != end) {
    fail(spec, token, "expected a number");
  }
  return v;
}

}  // namespace

Penalty parse_penalty_spec(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) fail(spec, spec, "missing ':'");
  const PenaltyFamily family = parse_family(spec, spec.substr(0, colon));

  std::optional<double> lambda, gamma, p;
  std::string_view rest = spec.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view token = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{}
                                           : rest.substr(comma + 1);
    const auto eq = token.find('=');
    if (eq == std::string_view::npos) fail(spec, token, "expected key=value");
    const std::string key = lower(trim(token.substr(0, eq)));
    const double v = parse_number(spec, token, token.substr(eq + 1));
    std::optional<double>* slot = nullptr;
    if (key == "lambda") slot = &lambda;
    else if (key == "gamma") slot = &gamma;
    else if (key == "p") slot = &p;
    else fail(spec, token, "unknown key");
    if (slot->has_value()) fail(spec, token, "duplicate key");
    *slot = v;
  }

  if (!lambda) fail(spec, spec, "missing lambda");
  const bool needs_gamma =
      family != PenaltyFamily::L1 && family != PenaltyFamily::Lp;
  if (needs_gamma && !gamma) fail(spec, spec, "missing gamma");
  if (!needs_gamma && gamma) fail(spec, "gamma", "gamma not used by this family");
  if (family == PenaltyFamily::Lp && !p) fail(spec, spec, "missing p");
  if (family != PenaltyFamily::Lp && p) fail(spec, "p", "p only applies to lp");
  return Penalty(family, *lambda, gamma.value_or(0.0), p.value_or(0.0));
}

std::string to_penalty_spec(const Penalty& penalty) {
  char buf[64];
  std::string out(family_name(penalty.family()));
  std::snprintf(buf, sizeof buf, ":lambda=%.17g", penalty.lambda());
  out += buf;
  if (penalty.uses_gamma()) {
    std::snprintf(buf, sizeof buf, ",gamma=%.17g", penalty.gamma());
    out += buf;
  }
  if (penalty.family() == PenaltyFamily::Lp) {
    std::snprintf(buf, sizeof buf, ",p=%.17g", penalty.p());
    out += buf;
  }
  return out;
}

}  // namespace gsvt
