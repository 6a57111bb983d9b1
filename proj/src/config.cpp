#include "ecogame/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace ecogame {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

constexpr std::array kKnownKeys = {
    "label",  "a0",     "a1",          "v0",          "c0",
    "v1",     "c1",     "theta",       "psi",         "b11",
    "b12",    "b21",    "b22",         "x0",          "n0",
    "y0",     "dt",     "t_max",       "record_every", "eps_stationary",
    "hold_time", "projection_tolerance", "protocol_matrix", "clamp"};

bool known(std::string_view key) {
  for (std::string_view k : kKnownKeys) {
    if (k == key) return true;
  }
  return false;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string shortest(double v) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  void add(std::string_view key, std::string_view value, int line) {
    const std::string k(key);
    if (!known(k)) fail(line, k, "unknown key");
    auto [it, inserted] = entries_.try_emplace(k, Entry{std::string(value), line});
    if (!inserted) {
      fail(line, k,
           "duplicate key (first set on line " +
               std::to_string(it->second.line) + ")");
    }
  }

  void override_with(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--set", 0, assignment, "override must be KEY=VALUE");
    }
    const std::string key(trim(std::string_view(assignment).substr(0, eq)));
    if (!known(key)) {
      throw ConfigError("--set", 0, key, "unknown key");
    }
    entries_[key] = Entry{std::string(trim(
                              std::string_view(assignment).substr(eq + 1))),
                          -1};
  }

  bool has(const std::string& key) const { return entries_.contains(key); }

  [[noreturn]] void fail(int line, const std::string& key,
                         const std::string& message) const {
    if (line < 0) throw ConfigError("--set", 0, key, message);
    throw ConfigError(source_, line, key, message);
  }

  const Entry& require(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) fail(0, key, "missing required key");
    return it->second;
  }

  std::optional<std::string> text(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second.value;
  }

  double parse_number(const std::string& key, std::string_view token,
                      int line) const {
    token = trim(token);
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} ||
        ptr != token.data() + token.size() || !std::isfinite(value)) {
      fail(line, key, "malformed number '" + std::string(token) + "'");
    }
    return value;
  }

  double number(const std::string& key) const {
    const Entry& e = require(key);
    return parse_number(key, e.value, e.line);
  }

  double number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  Payoff2x2 matrix(const std::string& key) const {
    const Entry& e = require(key);
    std::vector<double> values;
    std::string_view rest = e.value;
    while (true) {
      const auto comma = rest.find(',');
      values.push_back(parse_number(key, rest.substr(0, comma), e.line));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (values.size() != 4) {
      fail(e.line, key,
           "expected four comma-separated entries (row-major), got " +
               std::to_string(values.size()));
    }
    return {values[0], values[1], values[2], values[3]};
  }

  void check(const std::string& key, bool ok, const std::string& range) const {
    if (ok) return;
    const Entry& e = require(key);
    fail(e.line, key, "value " + e.value + " out of range " + range);
  }

 private:
  std::string source_;
  std::map<std::string, Entry> entries_;
};

GamePair read_game(const Reader& r) {
  const bool explicit_matrices = r.has("a0") || r.has("a1");
  const bool hawk_dove =
      r.has("v0") || r.has("c0") || r.has("v1") || r.has("c1");
  if (explicit_matrices && hawk_dove) {
    const std::string key = r.has("v0")   ? "v0"
                            : r.has("c0") ? "c0"
                            : r.has("v1") ? "v1"
                                          : "c1";
    r.fail(r.require(key).line, key,
           "hawk-dove parameters conflict with explicit a0/a1 matrices");
  }
  if (!hawk_dove) return {r.matrix("a0"), r.matrix("a1")};

  auto build = [&](const char* v_key, const char* c_key) {
    const double v = r.number(v_key);
    const double c = r.number(c_key);
    r.check(v_key, v > 0.0, "(0, c)");
    r.check(c_key, c > v, "(v, inf)");
    return hawk_dove_matrix(v, c);
  };
  return {build("v0", "c0"), build("v1", "c1")};
}

}  // namespace

ConfigError::ConfigError(std::string source, int line, std::string key,
                         const std::string& message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : "") +
                         ": key '" + key + "': " + message),
      source_(std::move(source)),
      line_(line),
      key_(std::move(key)) {}

Scenario parse_config(std::string_view text, std::string_view source,
                      std::span<const std::string> overrides) {
  Reader r{std::string(source)};
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text = newline == std::string_view::npos ? std::string_view{}
                                             : text.substr(newline + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      r.fail(line_no, std::string(line), "expected 'key = value'");
    }
    r.add(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no);
  }
  for (const std::string& o : overrides) r.override_with(o);

  Scenario s;
  if (const auto label = r.text("label")) {
    if (label->empty()) r.fail(r.require("label").line, "label", "empty label");
    s.label = *label;
  }
  s.model.game = read_game(r);

  s.model.env.theta = r.number("theta");
  r.check("theta", s.model.env.theta > 0.0, "(0, inf)");
  s.model.env.psi = r.number_or("psi", -1.0);
  if (r.has("psi")) r.check("psi", s.model.env.psi <= 0.0, "(-inf, 0]");

  auto unit = [&](const char* key) {
    const double v = r.number(key);
    r.check(key, v >= 0.0 && v <= 1.0, "[0, 1]");
    return v;
  };
  s.model.trust = {unit("b11"), unit("b12"), unit("b21"), unit("b22")};
  s.initial = {unit("x0"), unit("n0"), unit("y0")};

  IntegratorSettings& cfg = s.settings;
  cfg.dt = r.number_or("dt", cfg.dt);
  if (r.has("dt")) r.check("dt", cfg.dt > 0.0, "(0, inf)");
  cfg.t_max = r.number_or("t_max", cfg.t_max);
  if (r.has("t_max")) r.check("t_max", cfg.t_max >= cfg.dt, "[dt, inf)");
  if (r.has("record_every")) {
    const double every = r.number("record_every");
    r.check("record_every",
            every >= 1.0 && every <= 1e9 && every == std::floor(every),
            "(positive integer)");
    cfg.record_every = static_cast<int>(every);
  }
  cfg.eps_stationary = r.number_or("eps_stationary", cfg.eps_stationary);
  if (r.has("eps_stationary")) {
    r.check("eps_stationary", cfg.eps_stationary > 0.0, "(0, inf)");
  }
  cfg.hold_time = r.number_or("hold_time", cfg.hold_time);
  if (r.has("hold_time")) r.check("hold_time", cfg.hold_time >= 0.0, "[0, inf)");
  cfg.projection_tolerance =
      r.number_or("projection_tolerance", cfg.projection_tolerance);
  if (r.has("projection_tolerance")) {
    r.check("projection_tolerance", cfg.projection_tolerance > 0.0,
            "(0, inf)");
  }

  if (const auto mode = r.text("protocol_matrix")) {
    r.check("protocol_matrix", *mode == "env" || *mode == "opinion",
            "{env, opinion}");
    s.model.protocol = *mode == "opinion" ? ProtocolMatrix::kOpinion
                                          : ProtocolMatrix::kEnvironment;
  }
  if (const auto mode = r.text("clamp")) {
    r.check("clamp", *mode == "unit" || *mode == "positive",
            "{unit, positive}");
    s.model.clamp = *mode == "positive" ? ClampMode::kPositivePart
                                        : ClampMode::kUnitInterval;
  }

  validate(s);
  return s;
}

Scenario load_config(const std::filesystem::path& path,
                     std::span<const std::string> overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError(path.string(), 0, "<file>", "cannot open file");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string(), overrides);
}

std::string to_config_text(const Scenario& s) {
  auto matrix = [](const Payoff2x2& a) {
    return shortest(a.a11) + ", " + shortest(a.a12) + ", " + shortest(a.a21) +
           ", " + shortest(a.a22);
  };
  const IntegratorSettings& cfg = s.settings;
  std::ostringstream out;
  out << "label = " << s.label << '\n'
      << "a0 = " << matrix(s.model.game.depleted) << '\n'
      << "a1 = " << matrix(s.model.game.replenished) << '\n'
      << "theta = " << shortest(s.model.env.theta) << '\n'
      << "psi = " << shortest(s.model.env.psi) << '\n'
      << "b11 = " << shortest(s.model.trust.b11) << '\n'
      << "b12 = " << shortest(s.model.trust.b12) << '\n'
      << "b21 = " << shortest(s.model.trust.b21) << '\n'
      << "b22 = " << shortest(s.model.trust.b22) << '\n'
      << "x0 = " << shortest(s.initial.x) << '\n'
      << "n0 = " << shortest(s.initial.n) << '\n'
      << "y0 = " << shortest(s.initial.y) << '\n'
      << "dt = " << shortest(cfg.dt) << '\n'
      << "t_max = " << shortest(cfg.t_max) << '\n'
      << "record_every = " << cfg.record_every << '\n'
      << "eps_stationary = " << shortest(cfg.eps_stationary) << '\n'
      << "hold_time = " << shortest(cfg.hold_time) << '\n'
      << "projection_tolerance = " << shortest(cfg.projection_tolerance)
      << '\n'
      << "protocol_matrix = "
      << (s.model.protocol == ProtocolMatrix::kOpinion ? "opinion" : "env")
      << '\n'
      << "clamp = "
      << (s.model.clamp == ClampMode::kPositivePart ? "positive" : "unit")
      << '\n';
  return out.str();
}

std::string preset_config_text(std::string_view name) {
  if (name == "hawk-dove") {
    return R"(# Hawk-Dove game with environmental and opinion feedback.
# Strategy 1 = hawk, strategy 2 = dove.
label = hawk-dove

# Resource value and cost in the depleted (0) and replenished (1) environment.
v0 = 4
c0 = 12
v1 = 7
c1 = 10

# Hawks replenish at theta, doves deplete at psi.
theta = 2
psi = -1

# Opinion m1 trusts only hawks, opinion m2 trusts only doves.
b11 = 0.5
b12 = 0
b21 = 0
b22 = 0.5

x0 = 0.5
n0 = 0.3
# Vary with --set y0=0.7 to reach the other stationary state.
y0 = 0.45
)";
  }
  if (name == "prisoners-dilemma") {
    return R"(# Prisoner's Dilemma with environmental and opinion feedback.
# Strategy 1 = cooperate, strategy 2 = defect.
label = prisoners-dilemma

# Row-major payoffs: cooperation dominates when depleted (a0),
# defection dominates when replenished (a1).
a0 = 3.5, 1, 2, 0.75
a1 = 4, 1, 4.5, 1.25

# Cooperators replenish at theta, defectors deplete at psi.
theta = 2
psi = -1

# Opinion m1 trusts only cooperators, opinion m2 trusts only defectors.
b11 = 0.5
b12 = 0
b21 = 0
b22 = 0.5

x0 = 0.5
n0 = 0.3
y0 = 0.6
)";
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) +
                              "' (expected hawk-dove or prisoners-dilemma)");
}

}  // namespace ecogame
