#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "pgfcheck/syntax/parser.hpp"

namespace testsupport {

inline std::string program_path(const std::string& name) { return std::string(PGFCHECK_PROGRAMS_DIR) + "/" + name; }

inline std::string read_text(const std::string& name) {
  std::ifstream in(program_path(name));
  if (!in) throw std::runtime_error("cannot open " + program_path(name));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline pgfcheck::syntax::Program load(const std::string& name) { return pgfcheck::syntax::parse_program(read_text(name)); }

/// Program `name` with the invariant file `spec` attached as its spec section.
inline pgfcheck::syntax::Program load_with_spec(const std::string& name, const std::string& spec) {
  auto p = load(name);
  p.spec = pgfcheck::syntax::parse_spec(read_text(spec), p);
  return p;
}

}  // namespace testsupport
