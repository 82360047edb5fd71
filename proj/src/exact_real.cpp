#include "dioalign/exact_real.hpp"

#include <cctype>
#include <charconv>
#include <stdexcept>

#include "dioalign/rng.hpp"

namespace dioalign {

namespace {

// Extract the square part: d = sq^2 * sf with sf squarefree.
void squarefree_split(unsigned long d, unsigned long& sq, unsigned long& sf) {
    sq = 1;
    sf = 1;
    for (unsigned long p = 2; p * p <= d; p += (p == 2) ? 1 : 2) {
        unsigned e = 0;
        while (d % p == 0) {
            d /= p;
            ++e;
        }
        for (unsigned i = 0; i + 1 < e; i += 2) sq *= p;
        if (e % 2) sf *= p;
    }
    sf *= d;  // leftover prime
}

mpz_class pow10z(unsigned e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// QuadForm

void QuadForm::put(unsigned long m, const mpq_class& c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

QuadForm QuadForm::from_rat(const mpq_class& r) {
    QuadForm f;
    mpq_class c = r;
    c.canonicalize();
    f.put(1, c);
    return f;
}

QuadForm QuadForm::radical(const mpq_class& c, unsigned long d) {
    QuadForm f;
    if (c == 0 || d == 0) return f;
    unsigned long sq, sf;
    squarefree_split(d, sq, sf);
    mpq_class k = c * static_cast<long>(sq);
    k.canonicalize();
    f.put(sf, k);
    return f;
}

bool QuadForm::is_rational() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1);
}

mpq_class QuadForm::rational_value() const {
    if (terms_.empty()) return mpq_class(0);
    if (!is_rational()) throw ConfigError("value is not rational");
    return terms_.begin()->second;
}

std::size_t QuadForm::radical_count() const {
    std::size_t n = terms_.size();
    if (terms_.count(1)) --n;
    return n;
}

QuadForm QuadForm::operator+(const QuadForm& o) const {
    QuadForm r = *this;
    for (const auto& [m, c] : o.terms_) r.put(m, c);
    return r;
}

QuadForm QuadForm::operator-() const {
    QuadForm r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

QuadForm QuadForm::operator-(const QuadForm& o) const { return *this + (-o); }

QuadForm QuadForm::operator*(const QuadForm& o) const {
    QuadForm r;
    for (const auto& [m1, c1] : terms_) {
        for (const auto& [m2, c2] : o.terms_) {
            // sqrt(m1)*sqrt(m2) = g*sqrt(m1*m2/g^2), g = gcd(m1,m2);
            // both squarefree, so the product radicand is squarefree.
            unsigned long g = mpz_class(gcd(mpz_class(m1), mpz_class(m2))).get_ui();
            unsigned long m = (m1 / g) * (m2 / g);
            mpq_class c = c1 * c2 * static_cast<long>(g);
            c.canonicalize();
            r.put(m, c);
        }
    }
    return r;
}

QuadForm QuadForm::inverse() const {
    if (is_zero()) throw ConfigError("division by zero");
    if (is_rational()) {
        mpq_class r = rational_value();
        return from_rat(1 / r);
    }
    // Pick a prime p dividing some radicand and rationalize with respect to
    // the sqrt(p) -> -sqrt(p) conjugation; the conjugate product has no
    // radicand divisible by p, so recursion terminates.
    unsigned long p = 0;
    for (const auto& [m, c] : terms_) {
        if (m > 1) {
            unsigned long q = m;
            for (unsigned long f = 2; f * f <= q; ++f)
                if (q % f == 0) {
                    q = f;
                    break;
                }
            p = q;
            break;
        }
    }
    QuadForm conj;
    for (const auto& [m, c] : terms_) conj.terms_.emplace(m, (m % p == 0) ? -c : c);
    QuadForm denom = (*this) * conj;
    return conj * denom.inverse();
}

int QuadForm::sign() const {
    if (terms_.empty()) return 0;
    if (terms_.size() == 1) return sgn(terms_.begin()->second);
    // Nonzero by the canonical form; refine until the interval separates.
    for (mpfr_prec_t prec = 64;; prec *= 2) {
        int s = enclosure(prec).certified_sign();
        if (s == -1 || s == 0 || s == 1) return s;
        if (prec > (1 << 22)) throw std::logic_error("QuadForm::sign failed to separate");
    }
}

MpInterval QuadForm::enclosure(mpfr_prec_t prec) const {
    MpInterval sum(prec);
    for (const auto& [m, c] : terms_) {
        MpInterval t = MpInterval::from_mpq(c, prec);
        if (m > 1) t = t * MpInterval::sqrt_ui(m, prec);
        sum = sum + t;
    }
    return sum;
}

std::string QuadForm::str() const {
    // Common positive denominator, integer numerators, gcd-reduced.
    mpz_class den = 1;
    for (const auto& [m, c] : terms_) den = lcm(den, c.get_den());
    std::map<unsigned long, mpz_class> num;
    mpz_class g = den;
    for (const auto& [m, c] : terms_) {
        mpz_class a = c.get_num() * (den / c.get_den());
        num[m] = a;
        g = gcd(g, a);
    }
    if (g > 1) {
        den /= g;
        for (auto& [m, a] : num) a /= g;
    }
    std::size_t radicals = num.size() - (num.count(1) ? 1 : 0);
    mpz_class a0 = num.count(1) ? num[1] : mpz_class(0);
    if (radicals == 0) return "rat:" + a0.get_str() + "/" + den.get_str();
    if (radicals == 1) {
        auto it = num.rbegin();  // the single m > 1 entry sorts last
        return "surd:(" + a0.get_str() + "+" + it->second.get_str() + "*sqrt" +
               std::to_string(it->first) + ")/" + den.get_str();
    }
    std::string s = "quad:(" + a0.get_str();
    for (const auto& [m, a] : num) {
        if (m == 1) continue;
        s += "+" + a.get_str() + "*sqrt" + std::to_string(m);
    }
    s += ")/" + den.get_str();
    return s;
}

// ---------------------------------------------------------------------------
// ExactReal nodes

struct ExactReal::Node {
    enum class Tag { Exact, Decimal, Draw, Add, Sub, Mul, Div, Neg, Abs };
    Tag tag = Tag::Exact;

    QuadForm exact;  // Exact and Decimal (Decimal caches its rational value)
    mpz_class dec_mant;
    int dec_exp10 = 0;

    std::uint64_t stream = 0, index = 0;
    mutable std::mutex mu;
    mutable std::vector<std::uint64_t> blocks;

    std::shared_ptr<const Node> a, b;
};

namespace {
using Node = ExactReal::Node;
using Tag = ExactReal::Node::Tag;

std::shared_ptr<const Node> make_exact(QuadForm f) {
    auto n = std::make_shared<Node>();
    n->tag = Tag::Exact;
    n->exact = std::move(f);
    return n;
}

bool node_is_exact(const Node* n) { return n->tag == Tag::Exact || n->tag == Tag::Decimal; }

MpInterval draw_enclosure(const Node* n, mpfr_prec_t prec) {
    std::size_t nblocks = static_cast<std::size_t>((prec + 63) / 64);
    std::uint64_t key = mix_stream(n->stream, n->index);
    {
        std::lock_guard<std::mutex> lk(n->mu);
        while (n->blocks.size() < nblocks) n->blocks.push_back(mix_block(key, n->blocks.size()));
    }
    mpz_class m = 0;
    for (std::size_t j = 0; j < nblocks; ++j) {
        m <<= 64;
        mpz_class blk;
        std::uint64_t b = n->blocks[j];
        mpz_import(blk.get_mpz_t(), 1, 1, sizeof(b), 0, 0, &b);
        m += blk;
    }
    return MpInterval::dyadic(m, 64 * nblocks, prec);
}

MpInterval node_enclosure(const Node* n, mpfr_prec_t prec) {
    switch (n->tag) {
        case Tag::Exact:
        case Tag::Decimal:
            return n->exact.enclosure(prec);
        case Tag::Draw:
            return draw_enclosure(n, prec);
        case Tag::Add:
            return node_enclosure(n->a.get(), prec) + node_enclosure(n->b.get(), prec);
        case Tag::Sub:
            return node_enclosure(n->a.get(), prec) - node_enclosure(n->b.get(), prec);
        case Tag::Mul:
            return node_enclosure(n->a.get(), prec) * node_enclosure(n->b.get(), prec);
        case Tag::Div:
            return node_enclosure(n->a.get(), prec) / node_enclosure(n->b.get(), prec);
        case Tag::Neg:
            return -node_enclosure(n->a.get(), prec);
        case Tag::Abs:
            return abs_i(node_enclosure(n->a.get(), prec));
    }
    throw std::logic_error("unreachable");
}

}  // namespace

ExactReal::ExactReal() : node_(make_exact(QuadForm{})) {}

ExactReal ExactReal::from_rat(mpq_class r) {
    r.canonicalize();
    if (r.get_den() == 0) throw ConfigError("rational with zero denominator");
    return ExactReal(make_exact(QuadForm::from_rat(r)));
}

ExactReal ExactReal::from_int(long v) { return from_rat(mpq_class(v)); }
ExactReal ExactReal::from_mpz(mpz_class v) { return from_rat(mpq_class(std::move(v))); }

ExactReal ExactReal::sqrt_of(unsigned long d) {
    return ExactReal(make_exact(QuadForm::radical(mpq_class(1), d)));
}

ExactReal ExactReal::decimal(mpz_class mantissa, int exp10) {
    auto n = std::make_shared<Node>();
    n->tag = Tag::Decimal;
    n->dec_mant = mantissa;
    n->dec_exp10 = exp10;
    mpq_class v;
    if (exp10 >= 0)
        v = mpq_class(mantissa * pow10z(static_cast<unsigned>(exp10)));
    else
        v = mpq_class(mantissa, pow10z(static_cast<unsigned>(-exp10)));
    v.canonicalize();
    n->exact = QuadForm::from_rat(v);
    return ExactReal(std::move(n));
}

ExactReal ExactReal::draw(std::uint64_t stream, std::uint64_t index) {
    auto n = std::make_shared<Node>();
    n->tag = Tag::Draw;
    n->stream = stream;
    n->index = index;
    return ExactReal(std::move(n));
}

ExactReal::Kind ExactReal::kind() const {
    switch (node_->tag) {
        case Tag::Exact:
            return node_->exact.radical_count() == 0 ? Kind::Rational : Kind::Surd;
        case Tag::Decimal:
            return Kind::Decimal;
        case Tag::Draw:
            return Kind::Draw;
        default:
            return Kind::Compound;
    }
}

bool ExactReal::is_exact() const { return node_is_exact(node_.get()); }

const QuadForm& ExactReal::exact_form() const {
    if (!is_exact()) throw ConfigError("value has no exact form");
    return node_->exact;
}

mpq_class ExactReal::rational_value() const { return exact_form().rational_value(); }

ExactReal operator+(const ExactReal& a, const ExactReal& b) {
    if (a.is_exact() && b.is_exact())
        return ExactReal(make_exact(a.exact_form() + b.exact_form()));
    auto n = std::make_shared<Node>();
    n->tag = Tag::Add;
    n->a = a.node_;
    n->b = b.node_;
    return ExactReal(std::move(n));
}

ExactReal operator-(const ExactReal& a, const ExactReal& b) {
    if (a.is_exact() && b.is_exact())
        return ExactReal(make_exact(a.exact_form() - b.exact_form()));
    auto n = std::make_shared<Node>();
    n->tag = Tag::Sub;
    n->a = a.node_;
    n->b = b.node_;
    return ExactReal(std::move(n));
}

ExactReal operator*(const ExactReal& a, const ExactReal& b) {
    if (a.is_exact() && b.is_exact())
        return ExactReal(make_exact(a.exact_form() * b.exact_form()));
    auto n = std::make_shared<Node>();
    n->tag = Tag::Mul;
    n->a = a.node_;
    n->b = b.node_;
    return ExactReal(std::move(n));
}

ExactReal operator/(const ExactReal& a, const ExactReal& b) {
    if (b.is_exact()) {
        QuadForm inv = b.exact_form().inverse();  // throws on zero
        if (a.is_exact()) return ExactReal(make_exact(a.exact_form() * inv));
        return a * ExactReal(make_exact(std::move(inv)));
    }
    auto n = std::make_shared<Node>();
    n->tag = Tag::Div;
    n->a = a.node_;
    n->b = b.node_;
    return ExactReal(std::move(n));
}

ExactReal operator-(const ExactReal& a) {
    if (a.is_exact()) return ExactReal(make_exact(-a.exact_form()));
    auto n = std::make_shared<Node>();
    n->tag = Tag::Neg;
    n->a = a.node_;
    return ExactReal(std::move(n));
}

ExactReal abs(const ExactReal& a) {
    if (a.is_exact()) {
        const QuadForm& f = a.exact_form();
        return ExactReal(make_exact(f.sign() < 0 ? -f : f));
    }
    auto n = std::make_shared<Node>();
    n->tag = Tag::Abs;
    n->a = a.node_;
    return ExactReal(std::move(n));
}

int ExactReal::sign(unsigned cap_bits) const {
    if (is_exact()) return node_->exact.sign();
    for (mpfr_prec_t prec = 64; prec <= static_cast<mpfr_prec_t>(cap_bits); prec *= 2) {
        try {
            int s = node_enclosure(node_.get(), prec).certified_sign();
            if (s != 2) return s;
        } catch (const std::domain_error&) {
            // denominator interval not yet separated from zero; refine
        }
    }
    throw PrecisionCapError("sign not certified within precision cap");
}

int ExactReal::compare(const ExactReal& a, const ExactReal& b, unsigned cap_bits) {
    return (a - b).sign(cap_bits);
}

MpInterval ExactReal::enclosure(mpfr_prec_t prec) const { return node_enclosure(node_.get(), prec); }

mpz_class ExactReal::floor(unsigned cap_bits) const {
    for (mpfr_prec_t prec = 64;; prec *= 2) {
        bool last = prec >= static_cast<mpfr_prec_t>(cap_bits);
        try {
            MpInterval e = enclosure(prec);
            mpz_class lo_f;
            mpfr_get_z(lo_f.get_mpz_t(), e.lo(), MPFR_RNDD);
            mpz_class next = lo_f + 1;
            if (mpfr_cmp_z(e.hi(), next.get_mpz_t()) < 0) return lo_f;
            if (is_exact()) {
                // Resolve the boundary with exact comparisons.
                mpz_class n = lo_f;
                while (compare(*this, from_mpz(n + 1)) >= 0) ++n;
                while (compare(*this, from_mpz(n)) < 0) --n;
                return n;
            }
        } catch (const std::domain_error&) {
        }
        if (last) throw PrecisionCapError("floor not certified within precision cap");
    }
}

double ExactReal::to_double() const {
    for (mpfr_prec_t prec = 64; prec <= 1024; prec *= 2) {
        try {
            return enclosure(prec).mid_d();
        } catch (const std::domain_error&) {
        }
    }
    throw PrecisionCapError("no double approximation");
}

// ---------------------------------------------------------------------------
// Grammar

namespace {

struct Cursor {
    std::string_view s;
    std::size_t pos = 0;
    bool eat(char c) {
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    bool eat(std::string_view word) {
        if (s.substr(pos, word.size()) == word) {
            pos += word.size();
            return true;
        }
        return false;
    }
    bool done() const { return pos == s.size(); }
};

mpz_class parse_int(Cursor& c) {
    std::size_t start = c.pos;
    if (c.pos < c.s.size() && (c.s[c.pos] == '-' || c.s[c.pos] == '+')) ++c.pos;
    while (c.pos < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.pos]))) ++c.pos;
    if (c.pos == start || (c.pos == start + 1 && !std::isdigit(static_cast<unsigned char>(c.s[start]))))
        throw ConfigError("expected integer in number literal: " + std::string(c.s));
    return mpz_class(std::string(c.s.substr(start, c.pos - start)), 10);
}

unsigned long parse_ulong(Cursor& c) {
    mpz_class v = parse_int(c);
    if (v < 0 || !v.fits_ulong_p()) throw ConfigError("integer out of range: " + std::string(c.s));
    return v.get_ui();
}

std::uint64_t parse_u64(Cursor& c) {
    std::size_t start = c.pos;
    while (c.pos < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.pos]))) ++c.pos;
    if (c.pos == start) throw ConfigError("expected unsigned integer: " + std::string(c.s));
    std::uint64_t v = 0;
    auto sub = c.s.substr(start, c.pos - start);
    auto res = std::from_chars(sub.data(), sub.data() + sub.size(), v);
    if (res.ec != std::errc()) throw ConfigError("unsigned integer out of range: " + std::string(c.s));
    return v;
}

}  // namespace

ExactReal ExactReal::parse(std::string_view text) {
    Cursor c{text};
    if (c.eat("rat:")) {
        mpz_class num = parse_int(c);
        if (!c.eat('/')) throw ConfigError("rat literal needs '/': " + std::string(text));
        mpz_class den = parse_int(c);
        if (!c.done()) throw ConfigError("trailing characters: " + std::string(text));
        if (den == 0) throw ConfigError("rational with zero denominator: " + std::string(text));
        return from_rat(mpq_class(num, den));
    }
    if (c.eat("surd:") || c.eat("quad:")) {
        if (!c.eat('(')) throw ConfigError("expected '(' in surd literal: " + std::string(text));
        QuadForm f = QuadForm::from_rat(mpq_class(parse_int(c)));
        while (c.eat('+')) {
            mpz_class coeff = parse_int(c);
            if (!c.eat('*') || !c.eat("sqrt"))
                throw ConfigError("expected '*sqrt' in surd literal: " + std::string(text));
            unsigned long d = parse_ulong(c);
            f = f + QuadForm::radical(mpq_class(coeff), d);
        }
        if (!c.eat(')') || !c.eat('/'))
            throw ConfigError("expected ')/<int>' in surd literal: " + std::string(text));
        mpz_class den = parse_int(c);
        if (!c.done()) throw ConfigError("trailing characters: " + std::string(text));
        if (den == 0) throw ConfigError("surd denominator is zero: " + std::string(text));
        return ExactReal(make_exact(f * QuadForm::from_rat(mpq_class(1, den))));
    }
    if (c.eat("dec:")) {
        bool neg = false;
        if (c.eat('-')) neg = true;
        std::string digits;
        int exp10 = 0;
        while (c.pos < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.pos])))
            digits += c.s[c.pos++];
        if (c.eat('.')) {
            while (c.pos < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.pos]))) {
                digits += c.s[c.pos++];
                --exp10;
            }
        }
        if (c.eat('e') || c.eat('E')) {
            mpz_class e = parse_int(c);
            if (!e.fits_sint_p()) throw ConfigError("decimal exponent out of range");
            exp10 += static_cast<int>(e.get_si());
        }
        if (digits.empty() || !c.done()) throw ConfigError("bad decimal literal: " + std::string(text));
        mpz_class mant(digits, 10);
        if (neg) mant = -mant;
        return decimal(mant, exp10);
    }
    if (c.eat("rand:")) {
        std::uint64_t stream = parse_u64(c);
        if (!c.eat(':')) throw ConfigError("rand literal needs ':': " + std::string(text));
        std::uint64_t index = parse_u64(c);
        if (!c.done()) throw ConfigError("trailing characters: " + std::string(text));
        return draw(stream, index);
    }
    throw ConfigError("unknown number literal (want rat:/surd:/dec:/rand:): " + std::string(text));
}

std::optional<std::string> ExactReal::exact_str() const {
    switch (node_->tag) {
        case Tag::Exact:
            return node_->exact.str();
        case Tag::Decimal: {
            std::string s = "dec:";
            mpz_class m = node_->dec_mant;
            if (m < 0) {
                s += '-';
                m = -m;
            }
            std::string digits = m.get_str();
            int e = node_->dec_exp10;
            if (e >= 0) {
                s += digits + std::string(static_cast<std::size_t>(e), '0');
            } else {
                std::size_t frac = static_cast<std::size_t>(-e);
                if (digits.size() <= frac) digits.insert(0, frac - digits.size() + 1, '0');
                digits.insert(digits.size() - frac, ".");
                s += digits;
            }
            return s;
        }
        case Tag::Draw:
            return "rand:" + std::to_string(node_->stream) + ":" + std::to_string(node_->index);
        default:
            return std::nullopt;
    }
}

std::string ExactReal::str() const {
    auto s = exact_str();
    if (!s) throw ConfigError("compound value has no literal form");
    return *s;
}

mpq_class parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash != std::string_view::npos) {
        mpz_class num(std::string(text.substr(0, slash)), 10);
        mpz_class den(std::string(text.substr(slash + 1)), 10);
        if (den == 0) throw ConfigError("zero denominator: " + std::string(text));
        mpq_class r(num, den);
        r.canonicalize();
        return r;
    }
    auto dot = text.find('.');
    auto epos = text.find_first_of("eE");
    if (dot != std::string_view::npos || epos != std::string_view::npos) {
        ExactReal d = ExactReal::parse("dec:" + std::string(text));
        return d.rational_value();
    }
    return mpq_class(mpz_class(std::string(text), 10));
}

std::string rational_str(const mpq_class& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

}  // namespace dioalign
