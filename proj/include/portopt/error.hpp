#pragma once

#include <stdexcept>
#include <string>

namespace portopt {

// Caller passed something that breaks an operation's precondition.
class usage_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Out-of-range tuning parameter (ratios, counts, weights).
class parameter_error : public usage_error {
public:
    using usage_error::usage_error;
};

// Malformed or inconsistent input data (files, datasets).
class data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A domain invariant was found broken at runtime. Always a defect.
class invariant_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace portopt
