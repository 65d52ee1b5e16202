#include "twistlab/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "twistlab/probes.hpp"
#include "twistlab/rng.hpp"

namespace twistlab {

JValue JValue::boolean(bool b) {
  JValue v;
  v.kind_ = Kind::Bool;
  v.bool_ = b;
  return v;
}

JValue JValue::integer(long long i) {
  JValue v;
  v.kind_ = Kind::Int;
  v.int_ = i;
  return v;
}

JValue JValue::unsigned_integer(std::uint64_t u) {
  JValue v;
  v.kind_ = Kind::UInt;
  v.uint_ = u;
  return v;
}

JValue JValue::number(double d) {
  JValue v;
  v.kind_ = Kind::Double;
  v.num_ = d;
  return v;
}

JValue JValue::string(std::string s) {
  JValue v;
  v.kind_ = Kind::String;
  v.str_ = std::move(s);
  return v;
}

JValue JValue::array() {
  JValue v;
  v.kind_ = Kind::Array;
  return v;
}

JValue JValue::object() {
  JValue v;
  v.kind_ = Kind::Object;
  return v;
}

JValue& JValue::set(const std::string& key, JValue v) {
  if (kind_ != Kind::Object) throw std::invalid_argument("JValue: set on non-object");
  members_.emplace_back(key, std::move(v));
  return *this;
}

JValue& JValue::push(JValue v) {
  if (kind_ != Kind::Array) throw std::invalid_argument("JValue: push on non-array");
  items_.push_back(std::move(v));
  return *this;
}

std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void escape_string(const std::string& s, std::string& out) {
  out.push_back('"');
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

}  // namespace

void JValue::dump_to(std::string& out) const {
  switch (kind_) {
    case Kind::Null: out += "null"; break;
    case Kind::Bool: out += bool_ ? "true" : "false"; break;
    case Kind::Int: out += std::to_string(int_); break;
    case Kind::UInt: out += std::to_string(uint_); break;
    case Kind::Double: out += format_double(num_); break;
    case Kind::String: escape_string(str_, out); break;
    case Kind::Array: {
      out.push_back('[');
      for (std::size_t i = 0; i < items_.size(); ++i) {
        if (i) out.push_back(',');
        items_[i].dump_to(out);
      }
      out.push_back(']');
      break;
    }
    case Kind::Object: {
      out.push_back('{');
      for (std::size_t i = 0; i < members_.size(); ++i) {
        if (i) out.push_back(',');
        escape_string(members_[i].first, out);
        out.push_back(':');
        members_[i].second.dump_to(out);
      }
      out.push_back('}');
      break;
    }
  }
}

std::string JValue::dump() const {
  std::string out;
  dump_to(out);
  return out;
}

JValue vector_to_json(const FiniteVector& x) {
  JValue arr = JValue::array();
  for (const Complex& c : x.entries()) {
    JValue pair = JValue::array();
    pair.push(JValue::number(c.real()));
    pair.push(JValue::number(c.imag()));
    arr.push(std::move(pair));
  }
  return arr;
}

JValue element_to_json(const DerivedElement& e) {
  JValue arr = JValue::array();
  for (const FiniteVector& b : e.blocks()) arr.push(vector_to_json(b));
  return arr;
}

namespace {

bool looks_like_pair(const nlohmann::json& item) {
  if (!item.is_array() || item.empty() || item.size() > 2) return false;
  for (const nlohmann::json& v : item) {
    if (!v.is_number()) return false;
  }
  return true;
}

// An array whose items are all numbers or [re, im] pairs.
bool looks_like_block(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) return false;
  for (const nlohmann::json& item : j) {
    if (!item.is_number() && !looks_like_pair(item)) return false;
  }
  return true;
}

FiniteVector block_from_json(const nlohmann::json& j) {
  if (!looks_like_block(j)) {
    throw std::invalid_argument(
        "vector file: a block must be a nonempty array of numbers or [re, im] pairs");
  }
  std::vector<Complex> entries;
  entries.reserve(j.size());
  for (const nlohmann::json& item : j) {
    if (item.is_number()) {
      entries.emplace_back(item.get<double>(), 0.0);
    } else {
      const double re = item.at(0).get<double>();
      const double im = item.size() == 2 ? item.at(1).get<double>() : 0.0;
      entries.emplace_back(re, im);
    }
  }
  return FiniteVector(std::move(entries));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

long long parse_ll(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(what);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("vector token: bad ") + what + " '" + s + "'");
  }
}

FiniteVector block_from_token(const std::string& token, int fallback_dim) {
  const std::vector<std::string> f = split(token, ':');
  const std::string& head = f[0];

  if (!head.empty() && head[0] == 'e' && head.size() > 1) {
    const long long k = parse_ll(head.substr(1), "coordinate");
    if (k < 1) throw std::invalid_argument("vector token: e<k> needs k >= 1");
    long long dim = std::max<long long>(k, fallback_dim);
    if (f.size() == 2) dim = parse_ll(f[1], "dimension");
    if (f.size() > 2 || dim < k) {
      throw std::invalid_argument("vector token: bad unit vector '" + token + "'");
    }
    return FiniteVector::unit(static_cast<int>(dim), static_cast<int>(k - 1));
  }
  if (head == "ones" && f.size() == 2) {
    return FiniteVector::ones(static_cast<int>(parse_ll(f[1], "dimension")));
  }
  if (head == "zeros" && f.size() == 2) {
    return FiniteVector::zeros(static_cast<int>(parse_ll(f[1], "dimension")));
  }
  if (head == "dyadic" && f.size() == 2) {
    return dyadic_decay_vector(static_cast<int>(parse_ll(f[1], "dimension")));
  }
  if (head == "gauss" && f.size() == 3) {
    const int dim = static_cast<int>(parse_ll(f[1], "dimension"));
    const CounterRng rng(static_cast<std::uint64_t>(parse_ll(f[2], "seed")),
                         0x746f6b656eull);
    return gaussian_vector(dim, rng, 0);
  }
  if (head == "sign" && f.size() == 3) {
    const int dim = static_cast<int>(parse_ll(f[1], "dimension"));
    const CounterRng rng(static_cast<std::uint64_t>(parse_ll(f[2], "seed")),
                         0x746f6b656eull);
    return sign_vector(dim, rng, 0);
  }
  throw std::invalid_argument("vector token: unrecognized '" + token + "'");
}

}  // namespace

std::vector<FiniteVector> parse_vector_spec(const std::string& spec,
                                            int fallback_dim) {
  if (spec.empty()) throw std::invalid_argument("vector spec: empty");

  std::error_code ec;
  if (std::filesystem::exists(spec, ec)) {
    std::ifstream in(spec);
    if (!in) throw std::invalid_argument("vector file: cannot open '" + spec + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("vector file: " + std::string(e.what()));
    }
    if (!j.is_array() || j.empty()) {
      throw std::invalid_argument("vector file: top level must be a nonempty array");
    }
    // An array of entries is one block; otherwise it must be an array of
    // blocks. Arrays of 1-2 numbers read as [re, im] entries, so dim-2
    // multi-block files need the explicit pair form.
    std::vector<FiniteVector> blocks;
    if (looks_like_block(j)) {
      blocks.push_back(block_from_json(j));
    } else {
      for (const nlohmann::json& b : j) blocks.push_back(block_from_json(b));
    }
    for (const FiniteVector& b : blocks) {
      if (b.dim() != blocks.front().dim()) {
        throw std::invalid_argument("vector file: blocks must share a dimension");
      }
    }
    return blocks;
  }

  std::vector<FiniteVector> blocks;
  for (const std::string& token : split(spec, ';')) {
    blocks.push_back(block_from_token(token, fallback_dim));
  }
  for (const FiniteVector& b : blocks) {
    if (b.dim() != blocks.front().dim()) {
      throw std::invalid_argument("vector spec: blocks must share a dimension");
    }
  }
  return blocks;
}

JValue RunRecord::to_json() const {
  JValue root = JValue::object();
  root.set("command", JValue::string(command));
  root.set("params", params);
  root.set("seed", JValue::unsigned_integer(seed));
  root.set("results", results);
  root.set("tool_version", JValue::string(tool_version));
  if (elapsed_ms.has_value()) {
    root.set("elapsed_ms", JValue::integer(*elapsed_ms));
  }
  return root;
}

}  // namespace twistlab
