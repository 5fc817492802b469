#include "balsa/rational.hpp"

namespace balsa {

double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

std::string rat_string(const Rat& r) {
  BigInt p = numerator(r), q = denominator(r);
  if (q == 1) return p.str();
  return p.str() + "/" + q.str();
}

std::string rat_decimal(const Rat& r, int digits) {
  BigInt p = numerator(r), q = denominator(r);
  bool neg = p < 0;
  if (neg) p = -p;
  BigInt ip = p / q;
  BigInt rem = p % q;
  if (rem == 0) return (neg ? "-" : "") + ip.str();

  // A reduced denominator of the form 2^a * 5^b terminates after max(a, b)
  // digits; anything else gets the fixed rounded width.
  BigInt qq = q;
  int twos = 0, fives = 0;
  while (qq % 2 == 0) { qq /= 2; ++twos; }
  while (qq % 5 == 0) { qq /= 5; ++fives; }
  bool exact = (qq == 1);
  int nd = exact ? std::max(twos, fives) : digits;
  if (nd < 1) nd = 1;

  BigInt scale = 1;
  for (int i = 0; i < nd; ++i) scale *= 10;
  BigInt frac = rem * scale / q;
  if (!exact) {
    BigInt rr = rem * scale % q;
    if (2 * rr >= q) ++frac;
    if (frac >= scale) {  // rounding carried into the integer part
      ++ip;
      frac = 0;
    }
  }
  std::string fs = frac.str();
  while ((int)fs.size() < nd) fs.insert(fs.begin(), '0');
  while (fs.size() > 1 && fs.back() == '0') fs.pop_back();
  if (fs == "0") return (neg ? "-" : "") + ip.str();
  return (neg ? "-" : "") + ip.str() + "." + fs;
}

}  // namespace balsa
