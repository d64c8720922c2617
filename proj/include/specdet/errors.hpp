#pragma once

#include <stdexcept>
#include <string>

namespace specdet {

// Requested tolerance cannot be met by any available representation.
class precision_error : public std::runtime_error {
public:
    precision_error(const std::string& what, double best_bound)
        : std::runtime_error(what), best_bound_(best_bound) {}
    double best_bound() const { return best_bound_; }

private:
    double best_bound_;
};

// Series truncation budget exhausted before the tail dropped below tolerance.
class truncation_error : public std::runtime_error {
public:
    truncation_error(const std::string& what, double tail)
        : std::runtime_error(what), tail_(tail) {}
    double tail() const { return tail_; }

private:
    double tail_;
};

// A recurrence denominator vanished; carries the offending table indices.
class resonance_error : public std::runtime_error {
public:
    resonance_error(const std::string& what, int j, int m)
        : std::runtime_error(what), j_(j), m_(m) {}
    int index_j() const { return j_; }
    int index_m() const { return m_; }

private:
    int j_, m_;
};

// Root bracketing or refinement failed.
class search_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A path crossed a cut or left the admissible region.
class geometry_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Adaptive step control underflowed or exceeded its budget.
class integration_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace specdet
