#ifndef QUADLAB_ERRORS_HPP
#define QUADLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace quadlab {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NotInvolution : Error {
    explicit NotInvolution(const std::string& what) : Error(what) {}
};

struct Disconnected : Error {
    explicit Disconnected(const std::string& what) : Error(what) {}
};

// Euler characteristic differs from 2.
struct NonPlanar : Error {
    explicit NonPlanar(const std::string& what) : Error(what) {}
};

struct FaceDegreeNot4 : Error {
    int face_id;
    FaceDegreeNot4(int face, const std::string& what) : Error(what), face_id(face) {}
};

struct TooLarge : Error {
    explicit TooLarge(const std::string& what) : Error(what) {}
};

struct MalformedContour : Error {
    explicit MalformedContour(const std::string& what) : Error(what) {}
};

struct MalformedSnake : Error {
    explicit MalformedSnake(const std::string& what) : Error(what) {}
};

struct NotLabeledMap : Error {
    explicit NotLabeledMap(const std::string& what) : Error(what) {}
};

// An assertion inside the arc construction failed; indicates a bug, never
// expected on valid input.
struct ArcPlanarityFailure : Error {
    explicit ArcPlanarityFailure(const std::string& what) : Error(what) {}
};

struct IncompatibleComponents : Error {
    explicit IncompatibleComponents(const std::string& what) : Error(what) {}
};

struct NotGeodesicStar : Error {
    explicit NotGeodesicStar(const std::string& what) : Error(what) {}
};

struct DegenerateData : Error {
    explicit DegenerateData(const std::string& what) : Error(what) {}
};

struct IOError : Error {
    explicit IOError(const std::string& what) : Error(what) {}
};

}  // namespace quadlab

#endif
