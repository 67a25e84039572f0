#include "nlclaw/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace nlclaw {

std::string to_string(RunMode m) {
  switch (m) {
  case RunMode::NN:
    return "nn";
  case RunMode::Conservative:
    return "conservative";
  case RunMode::VelocityReg:
    return "velocity_reg";
  case RunMode::FluxReg:
    return "flux_reg";
  case RunMode::Euler:
    return "euler";
  case RunMode::NN2D:
    return "nn2d";
  }
  return "?";
}

std::string to_string(FluxKind f) {
  switch (f) {
  case FluxKind::Burgers:
    return "burgers";
  case FluxKind::Cubic:
    return "cubic";
  case FluxKind::Zero:
    return "zero";
  case FluxKind::Expression:
    return "expression";
  }
  return "?";
}

std::string ScenarioDiagnostic::to_string() const {
  if (line == 0) {
    return message;
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
}

namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
  std::size_t column = 0; ///< where the value starts
};

std::string trim(const std::string& s, std::size_t* lead = nullptr) {
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) {
    ++i;
  }
  std::size_t j = s.size();
  while (j > i && std::isspace(static_cast<unsigned char>(s[j - 1]))) {
    --j;
  }
  if (lead != nullptr) {
    *lead = i;
  }
  return s.substr(i, j - i);
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "name", "mode",   "initial", "uL",     "uR",   "breakpoints", "piece",  "C",
      "u0",   "rho0",   "v0",      "flux",   "f",    "fprime",      "flux_y", "epsilon",
      "epsilons", "T",  "dx",      "cfl",    "domain", "domain_y",  "output", "stride",
      "expect", "min_rate"};
  return keys;
}

class Reader {
public:
  std::vector<ScenarioDiagnostic> errors;
  std::map<std::string, Entry> single;
  std::vector<Entry> pieces;

  void read(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
      ++line;
      if (!raw.empty() && raw.back() == '\r') {
        raw.pop_back();
      }
      const std::size_t hash = raw.find('#');
      const std::string body = hash == std::string::npos ? raw : raw.substr(0, hash);
      std::size_t lead = 0;
      if (trim(body, &lead).empty()) {
        continue;
      }
      const std::size_t colon = body.find(':');
      if (colon == std::string::npos) {
        errors.push_back({line, body.size() + 1, "expected 'key: value'"});
        continue;
      }
      const std::string key = trim(body.substr(0, colon));
      if (key.empty()) {
        errors.push_back({line, colon + 1, "missing key before ':'"});
        continue;
      }
      if (known_keys().count(key) == 0) {
        errors.push_back({line, lead + 1, "unknown key '" + key + "'"});
        continue;
      }
      std::size_t vlead = 0;
      const std::string value = trim(body.substr(colon + 1), &vlead);
      const Entry e{value, line, colon + 2 + vlead};
      if (value.empty()) {
        errors.push_back({line, colon + 2, "missing value for '" + key + "'"});
        continue;
      }
      if (key == "piece") {
        pieces.push_back(e);
        continue;
      }
      if (single.count(key) != 0) {
        errors.push_back({line, lead + 1,
                          "duplicate key '" + key + "' (first on line " +
                              std::to_string(single[key].line) + ")"});
        continue;
      }
      single[key] = e;
    }
  }

  const Entry* get(const std::string& key) const {
    const auto it = single.find(key);
    return it == single.end() ? nullptr : &it->second;
  }

  std::optional<double> number(const Entry& e, std::size_t offset, const std::string& tok) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (tok.empty() || end != begin + tok.size() || !std::isfinite(v)) {
      errors.push_back({e.line, e.column + offset, "'" + tok + "' is not a number"});
      return std::nullopt;
    }
    return v;
  }

  std::optional<double> number(const std::string& key) {
    const Entry* e = get(key);
    return e == nullptr ? std::nullopt : number(*e, 0, e->value);
  }

  /// Comma-separated numbers; nullopt when any item fails.
  std::optional<std::vector<double>> list(const std::string& key) {
    const Entry* e = get(key);
    if (e == nullptr) {
      return std::nullopt;
    }
    std::vector<double> out;
    bool good = true;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = e->value.find(',', start);
      const std::string item = e->value.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      std::size_t lead = 0;
      const std::string tok = trim(item, &lead);
      const auto v = number(*e, start + lead, tok);
      if (v) {
        out.push_back(*v);
      } else {
        good = false;
      }
      if (comma == std::string::npos) {
        break;
      }
      start = comma + 1;
    }
    if (!good) {
      return std::nullopt;
    }
    return out;
  }

  /// Checks that the expression parses; reports the column inside the line.
  bool expression(const Entry& e, bool allow_y) {
    try {
      (void)Expression::parse(e.value, allow_y);
      return true;
    } catch (const ExprError& err) {
      const std::string msg = err.what();
      const std::size_t sep = msg.find(": ");
      errors.push_back({e.line, e.column + err.column() - 1,
                        "in expression: " + (sep == std::string::npos ? msg : msg.substr(sep + 2))});
      return false;
    }
  }

  void semantic(const Entry* e, const std::string& message) {
    if (e != nullptr) {
      errors.push_back({e->line, e->column, message});
    } else {
      errors.push_back({0, 0, message});
    }
  }
};

template <typename Enum>
std::optional<Enum> choose(Reader& r, const std::string& key,
                           const std::vector<std::pair<std::string, Enum>>& options) {
  const Entry* e = r.get(key);
  if (e == nullptr) {
    return std::nullopt;
  }
  for (const auto& [name, v] : options) {
    if (e->value == name) {
      return v;
    }
  }
  std::string names;
  for (const auto& [name, v] : options) {
    names += (names.empty() ? "" : ", ") + name;
  }
  r.semantic(e, "unknown " + key + " '" + e->value + "' (expected one of: " + names + ")");
  return std::nullopt;
}

} // namespace

ScenarioParse parse_scenario(const std::string& text) {
  Reader r;
  r.read(text);
  ScenarioParse out;
  ScenarioSpec& s = out.spec;

  if (const Entry* e = r.get("name")) {
    for (char c : e->value) {
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
        r.semantic(e, "name may only contain letters, digits, '_', '-' and '.'");
        break;
      }
    }
    s.name = e->value;
  } else {
    r.semantic(nullptr, "missing key 'name'");
  }

  if (auto m = choose<RunMode>(r, "mode",
                               {{"nn", RunMode::NN},
                                {"conservative", RunMode::Conservative},
                                {"velocity_reg", RunMode::VelocityReg},
                                {"flux_reg", RunMode::FluxReg},
                                {"euler", RunMode::Euler},
                                {"nn2d", RunMode::NN2D}})) {
    s.mode = *m;
  }
  const bool is_2d = s.mode == RunMode::NN2D;
  const bool is_euler = s.mode == RunMode::Euler;

  // Initial data.
  if (auto k = choose<InitialKind>(r, "initial",
                                   {{"riemann", InitialKind::Riemann},
                                    {"piecewise", InitialKind::Piecewise},
                                    {"expression", InitialKind::Expression}})) {
    s.initial = *k;
  }
  const Entry* initial_entry = r.get("initial");
  if (is_euler) {
    if (initial_entry != nullptr) {
      r.semantic(initial_entry, "euler scenarios give rho0 and v0 instead of 'initial'");
    }
    for (const char* key : {"rho0", "v0"}) {
      if (const Entry* e = r.get(key)) {
        if (r.expression(*e, false)) {
          (key[0] == 'r' ? s.rho0 : s.v0) = e->value;
        }
      } else {
        r.semantic(nullptr, std::string("euler scenarios need '") + key + "'");
      }
    }
  } else {
    for (const char* key : {"rho0", "v0"}) {
      if (const Entry* e = r.get(key)) {
        r.semantic(e, std::string("'") + key + "' is only used by mode euler");
      }
    }
    if (initial_entry == nullptr) {
      r.semantic(nullptr, "missing key 'initial'");
    }
  }
  const auto forbid = [&](const std::string& key, const std::string& why) {
    if (const Entry* e = r.get(key)) {
      r.semantic(e, "'" + key + "' " + why);
    }
  };
  if (s.initial == InitialKind::Riemann) {
    const auto uL = r.number("uL");
    const auto uR = r.number("uR");
    if (r.get("uL") == nullptr || r.get("uR") == nullptr) {
      r.semantic(initial_entry, "riemann data needs uL and uR");
    }
    s.uL = uL.value_or(0.0);
    s.uR = uR.value_or(0.0);
  } else {
    forbid("uL", "belongs to riemann data");
    forbid("uR", "belongs to riemann data");
  }
  if (s.initial == InitialKind::Piecewise) {
    if (auto bp = r.list("breakpoints")) {
      s.breakpoints = *bp;
      for (std::size_t i = 1; i < s.breakpoints.size(); ++i) {
        if (!(s.breakpoints[i] > s.breakpoints[i - 1])) {
          r.semantic(r.get("breakpoints"), "breakpoints must increase");
          break;
        }
      }
    } else if (r.get("breakpoints") == nullptr) {
      r.semantic(initial_entry, "piecewise data needs 'breakpoints'");
    }
    for (const Entry& e : r.pieces) {
      if (r.expression(e, false)) {
        s.pieces.push_back(e.value);
      }
    }
    if (r.get("breakpoints") != nullptr && r.pieces.size() != s.breakpoints.size() + 1 &&
        !s.breakpoints.empty()) {
      r.semantic(initial_entry, "piecewise data with " + std::to_string(s.breakpoints.size()) +
                                    " breakpoints needs " +
                                    std::to_string(s.breakpoints.size() + 1) + " 'piece' lines, got " +
                                    std::to_string(r.pieces.size()));
    }
    if (auto c = r.number("C")) {
      if (*c < 0.0) {
        r.semantic(r.get("C"), "C must be non-negative");
      }
      s.lipschitz_C = *c;
    }
  } else {
    forbid("breakpoints", "belongs to piecewise data");
    forbid("C", "belongs to piecewise data");
    for (const Entry& e : r.pieces) {
      r.semantic(&e, "'piece' belongs to piecewise data");
    }
  }
  if (s.initial == InitialKind::Expression) {
    if (const Entry* e = r.get("u0")) {
      if (r.expression(*e, is_2d)) {
        s.u0 = e->value;
      }
    } else {
      r.semantic(initial_entry, "expression data needs 'u0'");
    }
  } else {
    forbid("u0", "belongs to expression data");
  }
  if (is_2d && initial_entry != nullptr && s.initial != InitialKind::Expression &&
      s.initial != InitialKind::None) {
    r.semantic(initial_entry, "mode nn2d needs expression data");
  }

  // Flux.
  if (auto f = choose<FluxKind>(r, "flux",
                                {{"burgers", FluxKind::Burgers},
                                 {"cubic", FluxKind::Cubic},
                                 {"expression", FluxKind::Expression}})) {
    s.flux = *f;
  }
  if (s.flux == FluxKind::Expression) {
    for (const char* key : {"f", "fprime"}) {
      if (const Entry* e = r.get(key)) {
        if (r.expression(*e, false)) {
          (key[1] == '\0' ? s.f : s.fprime) = e->value;
        }
      } else {
        r.semantic(r.get("flux"), std::string("expression flux needs '") + key + "'");
      }
    }
  } else {
    forbid("f", "belongs to an expression flux");
    forbid("fprime", "belongs to an expression flux");
  }
  const bool needs_burgers =
      s.mode == RunMode::NN || s.mode == RunMode::Conservative || s.mode == RunMode::Euler;
  if (needs_burgers && s.flux != FluxKind::Burgers) {
    r.semantic(r.get("flux"), "mode " + to_string(s.mode) + " requires flux burgers");
  }
  if (is_2d) {
    if (auto f = choose<FluxKind>(r, "flux_y",
                                  {{"burgers", FluxKind::Burgers},
                                   {"cubic", FluxKind::Cubic},
                                   {"zero", FluxKind::Zero}})) {
      s.flux_y = *f;
    } else if (r.get("flux_y") == nullptr) {
      s.flux_y = s.flux == FluxKind::Cubic ? FluxKind::Cubic : FluxKind::Burgers;
    }
    if (s.flux == FluxKind::Expression) {
      r.semantic(r.get("flux"), "mode nn2d supports flux burgers or cubic");
    }
  } else {
    forbid("flux_y", "is only used by mode nn2d");
  }

  // Numbers.
  const Entry* eps1 = r.get("epsilon");
  const Entry* epsn = r.get("epsilons");
  if (eps1 != nullptr && epsn != nullptr) {
    r.semantic(epsn, "give either 'epsilon' or 'epsilons', not both");
  }
  if (eps1 != nullptr) {
    if (auto v = r.number("epsilon")) {
      s.epsilons = {*v};
    }
  } else if (epsn != nullptr) {
    if (auto v = r.list("epsilons")) {
      s.epsilons = *v;
    }
  } else {
    r.semantic(nullptr, "missing key 'epsilon' (or 'epsilons')");
  }
  for (double e : s.epsilons) {
    if (!(e > 0.0)) {
      r.semantic(eps1 != nullptr ? eps1 : epsn, "epsilon must be positive");
      break;
    }
  }
  if (auto v = r.number("T")) {
    s.T = *v;
    if (!(s.T > 0.0)) {
      r.semantic(r.get("T"), "T must be positive");
    }
  } else if (r.get("T") == nullptr) {
    r.semantic(nullptr, "missing key 'T'");
  }
  if (auto v = r.number("dx")) {
    s.dx = *v;
    if (!(s.dx > 0.0)) {
      r.semantic(r.get("dx"), "dx must be positive");
    }
  }
  if (auto v = r.number("cfl")) {
    s.cfl = *v;
    if (!(s.cfl > 0.0 && s.cfl <= 1.0)) {
      r.semantic(r.get("cfl"), "cfl must lie in (0, 1]");
    }
  }
  const auto interval = [&](const char* key, double& lo, double& hi) {
    if (auto v = r.list(key)) {
      if (v->size() != 2) {
        r.semantic(r.get(key), std::string("'") + key + "' takes two numbers a, b");
      } else if (!((*v)[0] < (*v)[1])) {
        r.semantic(r.get(key), std::string("'") + key + "' needs a < b");
      } else {
        lo = (*v)[0];
        hi = (*v)[1];
      }
    }
  };
  if (r.get("domain") == nullptr) {
    r.semantic(nullptr, "missing key 'domain'");
  }
  interval("domain", s.a, s.b);
  if (is_2d) {
    if (r.get("domain_y") == nullptr) {
      r.semantic(nullptr, "mode nn2d needs 'domain_y'");
    }
    interval("domain_y", s.ya, s.yb);
  } else {
    forbid("domain_y", "is only used by mode nn2d");
  }
  if (s.dx > 0.0 && s.b > s.a && (s.b - s.a) / s.dx < 4.0) {
    r.semantic(r.get("dx"), "dx is too coarse for the domain");
  }

  if (auto o = choose<OutputFormat>(r, "output", {{"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}})) {
    s.output = *o;
  }
  if (const Entry* e = r.get("stride")) {
    const auto v = r.number("stride");
    if (v) {
      if (!(*v >= 0.0) || std::floor(*v) != *v) {
        r.semantic(e, "stride must be a non-negative integer");
      } else {
        s.stride = static_cast<std::size_t>(*v);
      }
    }
  }
  if (auto x = choose<Expectation>(r, "expect",
                                   {{"none", Expectation::None},
                                    {"convergence", Expectation::Convergence},
                                    {"nonconvergence", Expectation::Nonconvergence}})) {
    s.expect = *x;
  }
  if (auto v = r.number("min_rate")) {
    s.min_rate = *v;
    if (*v < 0.0) {
      r.semantic(r.get("min_rate"), "min_rate must be non-negative");
    }
  }
  out.errors = std::move(r.errors);
  std::stable_sort(out.errors.begin(), out.errors.end(), [](const auto& x, const auto& y) {
    const auto key = [](const ScenarioDiagnostic& d) {
      return std::pair{d.line == 0 ? SIZE_MAX : d.line, d.column};
    };
    return key(x) < key(y);
  });
  return out;
}

} // namespace nlclaw
