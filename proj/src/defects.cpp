#include "oscrad/defects.hpp"

#include <cstdlib>
#include <cstring>

namespace oscrad::defects {

namespace {

Kind parse_env() {
  const char* v = std::getenv("OSCRAD_INJECT_DEFECT");
  if (!v || !*v || std::strcmp(v, "none") == 0) return Kind::none;
  if (std::strcmp(v, "q_gamma_sign") == 0) return Kind::q_gamma_sign;
  if (std::strcmp(v, "j2_subtraction") == 0) return Kind::j2_subtraction;
  return Kind::none;
}

Kind g_kind = parse_env();

}  // namespace

Kind active() { return g_kind; }

void force(Kind k) { g_kind = k; }

}  // namespace oscrad::defects
