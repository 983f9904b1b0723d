#pragma once
// Shared test scaffolding: always-on requirements that print [FAIL] with the
// source location and exit non-zero, plus closeness helpers and [PASS] lines.

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>

// Always-on requirement: never compiled out in Release.
#define REQUIRE(cond, msg)                                                      \
    do {                                                                        \
        if (!(cond)) {                                                          \
            std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " " << msg \
                      << "\n";                                                  \
            std::exit(1);                                                       \
        }                                                                       \
    } while (0)

#define REQUIRE_CLOSE(actual, expected, tol, msg)                               \
    do {                                                                        \
        const double a_ = (actual), e_ = (expected), t_ = (tol);                \
        if (!(std::fabs(a_ - e_) <= t_)) {                                      \
            std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " " << msg \
                      << " (actual " << a_ << ", expected " << e_              \
                      << ", |diff| " << std::fabs(a_ - e_) << " > " << t_       \
                      << ")\n";                                                 \
            std::exit(1);                                                       \
        }                                                                       \
    } while (0)

// Relative closeness with an absolute floor for values near zero.
#define REQUIRE_CLOSE_REL(actual, expected, rel, msg)                           \
    do {                                                                        \
        const double a_ = (actual), e_ = (expected), r_ = (rel);                \
        const double scale_ = std::fabs(e_) > 1e-300 ? std::fabs(e_) : 1.0;     \
        if (!(std::fabs(a_ - e_) <= r_ * scale_)) {                             \
            std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " " << msg \
                      << " (actual " << a_ << ", expected " << e_              \
                      << ", rel " << std::fabs(a_ - e_) / scale_ << " > " << r_ \
                      << ")\n";                                                 \
            std::exit(1);                                                       \
        }                                                                       \
    } while (0)

#define REQUIRE_THROWS(expr, exc_type, msg)                                     \
    do {                                                                        \
        bool caught_ = false;                                                   \
        try {                                                                   \
            (void)(expr);                                                       \
        } catch (const exc_type&) {                                             \
            caught_ = true;                                                     \
        }                                                                       \
        REQUIRE(caught_, msg);                                                  \
    } while (0)

inline void REQUIRE_FINITE(double x, const char* name) {
    if (!std::isfinite(x)) {
        std::cerr << "[FAIL] Non-finite: " << name << " = " << x << "\n";
        std::exit(1);
    }
}

inline void pass(const std::string& what) {
    std::cout << "[PASS] " << what << "\n";
}

inline void section(const std::string& name) {
    std::cout << "\n=== " << name << " ===\n";
}
