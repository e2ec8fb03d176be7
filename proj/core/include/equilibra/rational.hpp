#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>

namespace eq {

using Q = mpq_class;

Q parse_q(std::string_view s);
std::string q_str(const Q& q);

// -inf < rationals < +inf
class ExtRat {
public:
    ExtRat() = default;
    ExtRat(const Q& v) : v_(v) {}
    ExtRat(long v) : v_(v) {}
    ExtRat(int v) : v_(v) {}

    static ExtRat pos_inf() { ExtRat r; r.inf_ = 1; return r; }
    static ExtRat neg_inf() { ExtRat r; r.inf_ = -1; return r; }

    bool finite() const { return inf_ == 0; }
    bool is_pos_inf() const { return inf_ > 0; }
    bool is_neg_inf() const { return inf_ < 0; }
    const Q& value() const;

    friend bool operator==(const ExtRat& a, const ExtRat& b);
    friend std::strong_ordering operator<=>(const ExtRat& a, const ExtRat& b);

    friend ExtRat operator+(const ExtRat& a, const ExtRat& b);
    friend ExtRat operator-(const ExtRat& a, const ExtRat& b);
    ExtRat operator-() const;

    std::string str() const;
    static ExtRat parse(std::string_view s);

private:
    int inf_ = 0;
    Q v_;
};

inline const ExtRat& max(const ExtRat& a, const ExtRat& b) { return a < b ? b : a; }
inline const ExtRat& min(const ExtRat& a, const ExtRat& b) { return b < a ? b : a; }

}
