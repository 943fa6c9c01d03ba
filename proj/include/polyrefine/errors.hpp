#pragma once

#include <stdexcept>
#include <string>

namespace polyrefine {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    explicit Error(const std::string & what) : std::runtime_error(what) {}
};

#define POLYREFINE_DEFINE_ERROR(Name)                                      \
    class Name : public Error                                              \
    {                                                                      \
    public:                                                                \
        explicit Name(const std::string & what) : Error(what) {}           \
    }

POLYREFINE_DEFINE_ERROR(InvalidIndexError);
POLYREFINE_DEFINE_ERROR(TooDenseError);
POLYREFINE_DEFINE_ERROR(NonManifoldEdgeError);
POLYREFINE_DEFINE_ERROR(DegeneratePolygonError);
POLYREFINE_DEFINE_ERROR(CentroidNotInteriorError);
POLYREFINE_DEFINE_ERROR(SingularProjectionError);
POLYREFINE_DEFINE_ERROR(SolverFailureError);
POLYREFINE_DEFINE_ERROR(ParseError);
POLYREFINE_DEFINE_ERROR(IoError);

#undef POLYREFINE_DEFINE_ERROR

} // namespace polyrefine
