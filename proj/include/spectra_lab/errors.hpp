#pragma once

#include <stdexcept>
#include <string>

namespace spectra_lab {

// Mixing objects from different groups, fields or ambient rings.
struct structural_error : std::logic_error {
    using std::logic_error::logic_error;
};

// Operation undefined on this input (zero element, unit ideal, ...).
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Division by zero in an exact field.
struct arithmetic_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// pi-adic computation ran out of digits.
struct precision_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Newton iteration precondition violated.
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Config or literal text could not be parsed; carries a 1-based location.
struct parse_error : std::runtime_error {
    parse_error(const std::string& msg, int line = 0, int column = 0)
        : std::runtime_error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + msg : msg),
          line(line), column(column) {}
    int line;
    int column;
};

} // namespace spectra_lab
