#pragma once

#include "rdinst/backend.hpp"
#include "rdinst/frontend.hpp"
#include "rdinst/sexpr.hpp"
#include "rdinst/term_parser.hpp"

#include <fstream>
#include <sstream>
#include <string>

namespace testing {

inline rdinst::Term term(rdinst::TermManager& tm, const std::string& text) {
  rdinst::TermParser p(tm);
  return p.parse(rdinst::parse_sexprs(text).at(0));
}

inline rdinst::Problem problem(rdinst::TermManager& tm, const std::string& text) {
  return rdinst::normalize(tm, rdinst::parse_script(tm, text));
}

inline std::string fixture(const std::string& name) {
  std::ifstream in(std::string(RDINST_FIXTURES) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline bool have_backend() { return std::string(RDINST_Z3).size() > 0; }

inline rdinst::BackendConfig backend() {
  rdinst::BackendConfig c;
  c.command = {RDINST_Z3, "-in"};
  c.timeout = std::chrono::milliseconds(20'000);
  return c;
}

}  // namespace testing
