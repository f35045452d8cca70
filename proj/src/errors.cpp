#include "hdperc/errors.hpp"

namespace hdperc {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what)
    , line_(line)
    , column_(column)
{
}

} // namespace hdperc
