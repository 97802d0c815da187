#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "moprl/errors.hpp"

namespace moprl::cli {

const std::vector<std::string> kAllChecks = {"hankel",         "biorth",   "eigen",
                                             "cd-classical",   "cd-alternative",
                                             "j-factors",      "second-kind"};

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw ConfigError("empty number");
  try {
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
      const Integer num(s.substr(0, slash));
      const Integer den(s.substr(slash + 1));
      if (den == 0) throw ConfigError("zero denominator in '" + s + "'");
      return Rational(num) / Rational(den);
    }
    const auto dot = s.find('.');
    if (dot != std::string::npos) {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      const long frac_len = static_cast<long>(s.size() - dot - 1);
      if (digits.empty() || digits == "-" || digits == "+")
        throw ConfigError("bad number '" + s + "'");
      Rational r(Integer(digits));
      for (long i = 0; i < frac_len; ++i) r /= 10;
      return r;
    }
    return Rational(Integer(s));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse number '" + s + "'");
  }
}

Config parse_config_text(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int lineno = 0;
  bool have_n1 = false, have_n2 = false;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(lineno, "unterminated section header");
      section = line.substr(1, line.size() - 2);
      if (section != "measure" && section != "weights1" && section != "weights2" &&
          section != "compositions" && section != "run")
        fail(lineno, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) fail(lineno, "key outside any section");

    try {
      if (section == "measure") {
        if (key == "support") {
          const auto parts = split_ws(value);
          if (parts.size() != 2) fail(lineno, "support needs two endpoints");
          cfg.lo = parse_rational(parts[0]);
          cfg.hi = parse_rational(parts[1]);
          if (!(cfg.lo < cfg.hi)) fail(lineno, "support needs lo < hi");
        } else if (key == "density") {
          if (value != "lebesgue") fail(lineno, "only the lebesgue density is configurable");
          cfg.density = value;
        } else {
          fail(lineno, "unknown measure key '" + key + "'");
        }
      } else if (section == "weights1" || section == "weights2") {
        if (key != "weight") fail(lineno, "weight sections only take 'weight = kind param'");
        const auto parts = split_ws(value);
        if (parts.empty()) fail(lineno, "missing weight kind");
        WeightCfg w;
        w.kind = parts[0];
        if (w.kind != "monomial" && w.kind != "exponential" && w.kind != "binomial")
          fail(lineno, "unknown weight kind '" + w.kind + "'");
        if (parts.size() != 2) fail(lineno, "weight needs exactly one parameter");
        w.param = parse_rational(parts[1]);
        (section == "weights1" ? cfg.weights1 : cfg.weights2).push_back(w);
      } else if (section == "compositions") {
        if (key != "n1" && key != "n2") fail(lineno, "compositions take n1/n2");
        std::vector<int> parts;
        for (const auto& tok : split_ws(value)) {
          const long v = std::stol(tok);
          if (v < 1) fail(lineno, "composition parts must be >= 1");
          parts.push_back(static_cast<int>(v));
        }
        if (parts.empty()) fail(lineno, "empty composition");
        (key == "n1" ? cfg.n1 : cfg.n2) = parts;
        (key == "n1" ? have_n1 : have_n2) = true;
      } else {  // run
        if (key == "N") {
          cfg.N = std::stol(value);
        } else if (key == "backend") {
          if (value == "rational")
            cfg.backend = Backend::Rational;
          else if (value == "float")
            cfg.backend = Backend::Float;
          else
            fail(lineno, "backend must be rational or float");
        } else if (key == "precision") {
          cfg.precision_bits = static_cast<unsigned>(std::stoul(value));
        } else if (key == "checks") {
          cfg.checks = split_ws(value);
          for (const auto& c : cfg.checks)
            if (std::find(kAllChecks.begin(), kAllChecks.end(), c) == kAllChecks.end())
              fail(lineno, "unknown check '" + c + "'");
        } else if (key == "scales") {
          for (const auto& tok : split_ws(value)) cfg.scales.push_back(std::stol(tok));
        } else if (key == "x_samples" || key == "y_samples" || key == "z_samples") {
          auto& dst = key == "x_samples" ? cfg.x_samples
                      : key == "y_samples" ? cfg.y_samples
                                           : cfg.z_samples;
          for (const auto& tok : split_ws(value)) dst.push_back(parse_rational(tok));
        } else if (key == "out") {
          cfg.out_dir = value;
        } else if (key == "tol") {
          cfg.tol_global = std::stod(value);
        } else if (key.rfind("tol_", 0) == 0) {
          const std::string check = key.substr(4);
          if (std::find(kAllChecks.begin(), kAllChecks.end(), check) == kAllChecks.end())
            fail(lineno, "tolerance override for unknown check '" + check + "'");
          cfg.tol_overrides[check] = std::stod(value);
        } else {
          fail(lineno, "unknown run key '" + key + "'");
        }
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      fail(lineno, std::string("bad value for '") + key + "': " + e.what());
    }
  }

  if (cfg.weights1.empty() || cfg.weights2.empty())
    throw ConfigError("both weight systems need at least one weight");
  if (!have_n1 || !have_n2) throw ConfigError("both compositions must be given");
  if (cfg.weights1.size() != cfg.n1.size() || cfg.weights2.size() != cfg.n2.size())
    throw ConfigError("weight count must match composition family count");
  if (cfg.N < 1) throw ConfigError("run section needs N >= 1");
  for (const auto& [name, tol] : cfg.tol_overrides)
    if (tol <= 0) throw ConfigError("tolerances must be positive");
  if (cfg.tol_global && *cfg.tol_global <= 0) throw ConfigError("tolerances must be positive");
  return cfg;
}

Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace moprl::cli
