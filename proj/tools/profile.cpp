#include "profile.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "bmerge/error.hpp"

namespace bmerge::cli {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-')) {
      return false;
    }
  }
  return true;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw PreconditionError("profile line " + std::to_string(line) + ": " + what);
}

}  // namespace

Universe Profile::universe_of(bool with_target) const {
  if (universe) return *universe;
  std::vector<Formula> all = bases;
  if (with_target && target) all.push_back(*target);
  return Universe::of(all);
}

const Formula& Profile::require_target() const {
  if (!target) throw PreconditionError("the profile has no target line");
  return *target;
}

Profile parse_profile(std::string_view text) {
  Profile p;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  bool saw_metric = false;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) fail(lineno, "expected 'key: value'");
    const std::string key = trim(std::string_view(line).substr(0, colon));
    const std::string value = trim(std::string_view(line).substr(colon + 1));
    auto formula = [&] {
      try {
        return parse_formula(value);
      } catch (const ParseError& e) {
        fail(lineno, e.what());
      }
    };
    if (key.rfind("base", 0) == 0 && (key.size() == 4 || key[4] == ' ' || key[4] == '\t')) {
      std::string name = trim(std::string_view(key).substr(4));
      if (name.empty()) name = "K" + std::to_string(p.bases.size() + 1);
      if (!valid_name(name)) fail(lineno, "invalid base name '" + name + "'");
      for (const auto& n : p.names) {
        if (n == name) fail(lineno, "duplicate base name '" + name + "'");
      }
      p.names.push_back(name);
      p.bases.push_back(formula());
    } else if (key == "target") {
      if (p.target) fail(lineno, "second target line");
      p.target = formula();
    } else if (key == "metric") {
      if (saw_metric) fail(lineno, "second metric line");
      saw_metric = true;
      try {
        p.metric = parse_metric(value);
      } catch (const Error& e) {
        fail(lineno, e.what());
      }
    } else if (key == "universe") {
      if (p.universe) fail(lineno, "second universe line");
      std::vector<std::string> names;
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!valid_name(item)) fail(lineno, "invalid variable name '" + item + "'");
        names.push_back(item);
      }
      try {
        p.universe = Universe(std::move(names));
      } catch (const Error& e) {
        fail(lineno, e.what());
      }
    } else {
      fail(lineno, "unknown key '" + key + "'");
    }
  }
  if (p.bases.empty()) throw PreconditionError("the profile has no base");
  if (p.universe) {
    for (const auto& f : p.bases) {
      if (!p.universe->covers(f)) {
        throw PreconditionError("explicit universe misses variables of " + f.to_string());
      }
    }
    if (p.target && !p.universe->covers(*p.target)) {
      throw PreconditionError("explicit universe misses variables of the target");
    }
  }
  const Universe u = p.universe_of(true);
  for (std::size_t i = 0; i < p.bases.size(); ++i) {
    if (!is_satisfiable(p.bases[i], u)) {
      throw UnsatisfiableBase("base " + p.names[i] + " is unsatisfiable", i);
    }
  }
  return p;
}

Profile load_profile(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw PreconditionError("cannot read profile '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_profile(ss.str());
}

}  // namespace bmerge::cli
