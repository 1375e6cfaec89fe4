#ifndef OSCRAD_DEFECTS_HPP
#define OSCRAD_DEFECTS_HPP

namespace oscrad::defects {

// Self-test fault injection, driven by OSCRAD_INJECT_DEFECT.  The verification
// suite must go red under either mutation; nothing here is active otherwise.
enum class Kind {
  none,
  q_gamma_sign,     // flips the sign of the i (m w0^2/lambda_e^2) z term of q(z)
  j2_subtraction,   // drops the pole-cancelling subtraction in the J2 integrand
};

Kind active();
void force(Kind k);  // overrides the environment, used by unit tests

}  // namespace oscrad::defects

#endif
