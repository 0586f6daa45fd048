#pragma once

#include <string>

namespace spectra_lab {

// Unknown only ever means "not enough digits"; it never hides a definite answer.
enum class TriBool { False, True, Unknown };

inline TriBool to_tri(bool b) { return b ? TriBool::True : TriBool::False; }

inline TriBool operator&&(TriBool a, TriBool b) {
    if (a == TriBool::False || b == TriBool::False) return TriBool::False;
    if (a == TriBool::True && b == TriBool::True) return TriBool::True;
    return TriBool::Unknown;
}

inline TriBool operator||(TriBool a, TriBool b) {
    if (a == TriBool::True || b == TriBool::True) return TriBool::True;
    if (a == TriBool::False && b == TriBool::False) return TriBool::False;
    return TriBool::Unknown;
}

inline TriBool operator!(TriBool a) {
    if (a == TriBool::Unknown) return a;
    return a == TriBool::True ? TriBool::False : TriBool::True;
}

inline const char* to_string(TriBool b) {
    switch (b) {
    case TriBool::True: return "true";
    case TriBool::False: return "false";
    case TriBool::Unknown: return "unknown";
    }
    return "?";
}

} // namespace spectra_lab
