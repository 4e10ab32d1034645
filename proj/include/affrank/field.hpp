#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "affrank/errors.hpp"

namespace affrank {

/// Prime modulus descriptor for GF(q), 2 <= q <= 251.
struct FieldSpec {
    uint16_t q;

    explicit FieldSpec(unsigned modulus) : q(static_cast<uint16_t>(modulus)) {
        if (modulus < 2 || modulus > 251)
            throw usage_error("FieldSpec: modulus " + std::to_string(modulus) +
                              " outside [2, 251]");
        for (unsigned d = 2; d * d <= modulus; ++d)
            if (modulus % d == 0)
                throw usage_error("FieldSpec: modulus " + std::to_string(modulus) +
                                  " is not prime");
    }

    bool operator==(const FieldSpec&) const = default;
};

namespace fp {

// Raw residue arithmetic. Inputs must already be reduced.
inline uint8_t add(uint8_t a, uint8_t b, uint16_t q) {
    unsigned s = unsigned(a) + b;
    return uint8_t(s >= q ? s - q : s);
}

inline uint8_t sub(uint8_t a, uint8_t b, uint16_t q) {
    return uint8_t(a >= b ? a - b : a + q - b);
}

inline uint8_t neg(uint8_t a, uint16_t q) { return uint8_t(a == 0 ? 0 : q - a); }

inline uint8_t mul(uint8_t a, uint8_t b, uint16_t q) {
    return uint8_t((unsigned(a) * b) % q);
}

inline uint8_t pow(uint8_t a, unsigned e, uint16_t q) {
    uint8_t r = 1;
    while (e) {
        if (e & 1) r = mul(r, a, q);
        a = mul(a, a, q);
        e >>= 1;
    }
    return r;
}

inline uint8_t inv(uint8_t a, uint16_t q) {
    if (a == 0) throw arithmetic_error("GF(" + std::to_string(q) + "): inverse of zero");
    return pow(a, unsigned(q) - 2, q); // Fermat; q prime
}

inline uint8_t div(uint8_t a, uint8_t b, uint16_t q) { return mul(a, inv(b, q), q); }

inline uint8_t reduce(long long v, uint16_t q) {
    long long r = v % q;
    if (r < 0) r += q;
    return uint8_t(r);
}

} // namespace fp

/// An element of GF(q), stored fully reduced. Immutable value type.
class Scalar {
public:
    Scalar(unsigned value, FieldSpec field) : field_(field), v_(fp::reduce(value, field.q)) {}

    uint8_t value() const { return v_; }
    FieldSpec field() const { return field_; }

    bool operator==(const Scalar& o) const { return field_ == o.field_ && v_ == o.v_; }

    friend Scalar operator+(Scalar a, Scalar b) {
        check_fields(a, b, "add");
        return Scalar(fp::add(a.v_, b.v_, a.field_.q), a.field_);
    }
    friend Scalar operator-(Scalar a, Scalar b) {
        check_fields(a, b, "sub");
        return Scalar(fp::sub(a.v_, b.v_, a.field_.q), a.field_);
    }
    friend Scalar operator*(Scalar a, Scalar b) {
        check_fields(a, b, "mul");
        return Scalar(fp::mul(a.v_, b.v_, a.field_.q), a.field_);
    }
    friend Scalar operator/(Scalar a, Scalar b) {
        check_fields(a, b, "div");
        return Scalar(fp::div(a.v_, b.v_, a.field_.q), a.field_);
    }
    Scalar operator-() const { return Scalar(fp::neg(v_, field_.q), field_); }

    Scalar inverse() const { return Scalar(fp::inv(v_, field_.q), field_); }

private:
    static void check_fields(Scalar a, Scalar b, const char* op) {
        if (!(a.field_ == b.field_))
            throw usage_error(std::string("Scalar ") + op + ": mismatched moduli " +
                              std::to_string(a.field_.q) + " vs " + std::to_string(b.field_.q));
    }

    FieldSpec field_;
    uint8_t v_;
};

/// All elements of GF(q) in ascending residue order: 0, 1, ..., q-1.
inline std::vector<Scalar> enumerate_field(FieldSpec field) {
    std::vector<Scalar> out;
    out.reserve(field.q);
    for (unsigned v = 0; v < field.q; ++v) out.emplace_back(v, field);
    return out;
}

} // namespace affrank
