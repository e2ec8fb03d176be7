#include "equilibra/rational.hpp"

#include <stdexcept>

namespace eq {

Q parse_q(std::string_view s)
{
    std::string t(s);
    if (t.empty())
        throw std::invalid_argument("empty rational");
    for (char c : t)
        if (!(c == '-' || c == '+' || c == '/' || (c >= '0' && c <= '9')))
            throw std::invalid_argument("bad rational '" + t + "'");
    if (t[0] == '+')
        t.erase(0, 1);
    Q q;
    if (q.set_str(t, 10) != 0)
        throw std::invalid_argument("bad rational '" + std::string(s) + "'");
    if (q.get_den() == 0)
        throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
    q.canonicalize();
    return q;
}

std::string q_str(const Q& q)
{
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

const Q& ExtRat::value() const
{
    if (inf_ != 0)
        throw std::domain_error("value() of an infinite extended rational");
    return v_;
}

bool operator==(const ExtRat& a, const ExtRat& b)
{
    if (a.inf_ != b.inf_)
        return false;
    return a.inf_ != 0 || a.v_ == b.v_;
}

std::strong_ordering operator<=>(const ExtRat& a, const ExtRat& b)
{
    if (a.inf_ != b.inf_)
        return a.inf_ <=> b.inf_;
    if (a.inf_ != 0)
        return std::strong_ordering::equal;
    int c = cmp(a.v_, b.v_);
    return c <=> 0;
}

ExtRat operator+(const ExtRat& a, const ExtRat& b)
{
    if (a.inf_ != 0 && b.inf_ != 0 && a.inf_ != b.inf_)
        throw std::domain_error("inf - inf");
    if (a.inf_ != 0)
        return a;
    if (b.inf_ != 0)
        return b;
    return ExtRat(Q(a.v_ + b.v_));
}

ExtRat ExtRat::operator-() const
{
    ExtRat r = *this;
    r.inf_ = -inf_;
    r.v_ = -v_;
    return r;
}

ExtRat operator-(const ExtRat& a, const ExtRat& b) { return a + (-b); }

std::string ExtRat::str() const
{
    if (inf_ > 0)
        return "+inf";
    if (inf_ < 0)
        return "-inf";
    return q_str(v_);
}

ExtRat ExtRat::parse(std::string_view s)
{
    if (s == "+inf" || s == "inf")
        return pos_inf();
    if (s == "-inf")
        return neg_inf();
    return ExtRat(parse_q(s));
}

}
