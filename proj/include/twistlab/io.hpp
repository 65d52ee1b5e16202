#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "twistlab/derivations.hpp"
#include "twistlab/seqcore.hpp"

namespace twistlab {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEEull;

// Insertion-ordered JSON value with fixed number formatting: every double
// prints with 17 significant digits so records round-trip exactly and two
// runs with the same inputs emit identical bytes.
class JValue {
 public:
  enum class Kind { Null, Bool, Int, UInt, Double, String, Array, Object };

  JValue() : kind_(Kind::Null) {}
  static JValue boolean(bool b);
  static JValue integer(long long v);
  static JValue unsigned_integer(std::uint64_t v);
  static JValue number(double v);
  static JValue string(std::string s);
  static JValue array();
  static JValue object();

  Kind kind() const { return kind_; }
  JValue& set(const std::string& key, JValue v);  // object insert (ordered)
  JValue& push(JValue v);                         // array append
  std::string dump() const;

  // Access used by tests and the schema checker.
  const std::vector<std::pair<std::string, JValue>>& members() const { return members_; }
  const std::vector<JValue>& items() const { return items_; }
  const std::string& str() const { return str_; }
  double num() const { return num_; }
  long long intval() const { return int_; }
  std::uint64_t uintval() const { return uint_; }
  bool boolval() const { return bool_; }

 private:
  void dump_to(std::string& out) const;

  Kind kind_;
  bool bool_ = false;
  long long int_ = 0;
  std::uint64_t uint_ = 0;
  double num_ = 0.0;
  std::string str_;
  std::vector<JValue> items_;
  std::vector<std::pair<std::string, JValue>> members_;
};

std::string format_double(double v);  // %.17g
JValue vector_to_json(const FiniteVector& x);
JValue element_to_json(const DerivedElement& e);

// Parses a vector/element specification. If `spec` names an existing file
// it is read as JSON: an array of entries is one block, an array of arrays
// is a block list; entries are numbers or [re, im] pairs. Otherwise `spec`
// is a token list, blocks separated by ';', each one of
//   e<k>[:dim] | ones:<dim> | zeros:<dim> | gauss:<dim>:<seed> |
//   sign:<dim>:<seed> | dyadic:<dim>
// A bare e<k> has dimension max(k, fallback_dim).
std::vector<FiniteVector> parse_vector_spec(const std::string& spec,
                                            int fallback_dim = 0);

struct RunRecord {
  std::string command;
  JValue params = JValue::object();
  std::uint64_t seed = kDefaultSeed;
  JValue results = JValue::object();
  std::string tool_version = kToolVersion;
  // Timing is reported only on request: the default record is
  // byte-for-byte reproducible across runs.
  std::optional<long long> elapsed_ms;

  JValue to_json() const;
};

}  // namespace twistlab
