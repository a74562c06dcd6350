#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "toboggan/errors.hpp"
#include "toboggan/potential.hpp"

namespace toboggan {

/// Text grammar, one statement per line or block:
///
///   # comment
///   ell = 0.3
///   harmonic = 1
///   term { beta = "1/2", g = 0.1 }          # optional g_im = ...
///   pole { re = 1, im = 0, G_re = 0.1, G_im = 0.2 }
///
/// Blocks may span several lines; separators inside blocks are commas or
/// newlines.
namespace detail {

struct ConfigLexer {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1;

  void skip_space() {
    while (pos < text.size()) {
      const char ch = text[pos];
      if (ch == '#') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else if (ch == '\n') {
        ++line;
        ++pos;
      } else if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',' || ch == ';') {
        ++pos;
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_space();
    return pos >= text.size();
  }

  bool peek(char ch) {
    skip_space();
    return pos < text.size() && text[pos] == ch;
  }

  void expect(char ch) {
    if (!peek(ch)) throw ParseError(std::string("expected '") + ch + "'", line);
    ++pos;
  }

  std::string identifier() {
    skip_space();
    const std::size_t start = pos;
    while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    if (start == pos) throw ParseError("expected a key", line);
    return text.substr(start, pos - start);
  }

  std::string value() {
    skip_space();
    if (pos < text.size() && text[pos] == '"') {
      const std::size_t close = text.find('"', pos + 1);
      if (close == std::string::npos || text.find('\n', pos) < close)
        throw ParseError("unterminated string", line);
      std::string v = text.substr(pos + 1, close - pos - 1);
      pos = close + 1;
      return v;
    }
    const std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != ',' && text[pos] != ';' && text[pos] != '}' && text[pos] != '#')
      ++pos;
    if (start == pos) throw ParseError("expected a value", line);
    return text.substr(start, pos - start);
  }
};

inline double parse_number(const std::string& s, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError("bad number '" + s + "'", line);
  }
  if (used != s.size()) throw ParseError("bad number '" + s + "'", line);
  return v;
}

inline std::map<std::string, std::string> parse_block(ConfigLexer& lx) {
  std::map<std::string, std::string> kv;
  lx.expect('{');
  while (!lx.peek('}')) {
    if (lx.at_end()) throw ParseError("unterminated block", lx.line);
    const std::string key = lx.identifier();
    lx.expect('=');
    if (kv.count(key)) throw ParseError("duplicate key '" + key + "'", lx.line);
    kv[key] = lx.value();
  }
  lx.expect('}');
  return kv;
}

inline double take(std::map<std::string, std::string>& kv, const std::string& key, int line,
                   bool required, double fallback = 0.0) {
  const auto it = kv.find(key);
  if (it == kv.end()) {
    if (required) throw ParseError("missing key '" + key + "'", line);
    return fallback;
  }
  const double v = parse_number(it->second, line);
  kv.erase(it);
  return v;
}

}  // namespace detail

inline PowerLawPotential parse_potential(const std::string& text) {
  PowerLawPotential v;
  detail::ConfigLexer lx{text};
  while (!lx.at_end()) {
    const int line = lx.line;
    const std::string key = lx.identifier();
    if (key == "term" || key == "pole") {
      auto kv = detail::parse_block(lx);
      if (key == "term") {
        const auto it = kv.find("beta");
        if (it == kv.end()) throw ParseError("term without beta", line);
        RationalExponent beta;
        try {
          beta = RationalExponent::parse(it->second);
        } catch (const InvalidArgument& e) {
          throw ParseError(e.what(), line);
        }
        kv.erase(it);
        const double g = detail::take(kv, "g", line, true);
        const double g_im = detail::take(kv, "g_im", line, false);
        v.terms.push_back({beta, {g, g_im}});
      } else {
        const double re = detail::take(kv, "re", line, true);
        const double im = detail::take(kv, "im", line, false);
        const double gre = detail::take(kv, "G_re", line, true);
        const double gim = detail::take(kv, "G_im", line, false);
        v.poles.push_back({{re, im}, {gre, gim}});
      }
      if (!kv.empty()) throw ParseError("unknown key '" + kv.begin()->first + "' in " + key, line);
    } else if (key == "ell" || key == "harmonic") {
      lx.expect('=');
      const double x = detail::parse_number(lx.value(), line);
      (key == "ell" ? v.ell : v.harmonic) = x;
    } else {
      throw ParseError("unknown key '" + key + "'", line);
    }
  }
  return v;
}

inline PowerLawPotential load_potential(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open potential file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_potential(ss.str());
}

/// Shortest decimal that round-trips (17 significant digits).
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string format_potential(const PowerLawPotential& v) {
  std::ostringstream os;
  os << "ell = " << format_double(v.ell) << "\n";
  os << "harmonic = " << format_double(v.harmonic) << "\n";
  for (const auto& t : v.terms) {
    os << "term { beta = \"" << t.beta.str() << "\", g = " << format_double(t.g.real());
    if (t.g.imag() != 0.0) os << ", g_im = " << format_double(t.g.imag());
    os << " }\n";
  }
  for (const auto& p : v.poles) {
    os << "pole { re = " << format_double(p.location.real()) << ", im = " << format_double(p.location.imag())
       << ", G_re = " << format_double(p.strength.real()) << ", G_im = " << format_double(p.strength.imag())
       << " }\n";
  }
  return os.str();
}

}  // namespace toboggan
