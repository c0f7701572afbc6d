#pragma once

#include <memory>
#include <string>

#include "cvf/linalg.hpp"

namespace cvf::expr {

/// Compiled multi-component expression over variables x1..xn.
///
/// Grammar:
///   program := expr (';' expr)* [';']
///   expr    := term (('+'|'-') term)*
///   term    := factor (('*'|'/') factor)*
///   factor  := base ('^' factor)?
///   base    := number | 'x'digits | func '(' expr ')' | '(' expr ')' | '-' base
///   func    := sin | cos | tanh | exp | abs | sqrt
class Program {
public:
    /// Parses `source`; the component count must equal `dim` and every
    /// variable index must lie in 1..dim. Throws cvf::ParseError with the
    /// offending offset/line/column otherwise.
    static Program parse(const std::string& source, std::size_t dim);

    std::size_t components() const;
    std::size_t dim() const;
    Vector eval(const Vector& x) const;
    const std::string& source() const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

} // namespace cvf::expr
