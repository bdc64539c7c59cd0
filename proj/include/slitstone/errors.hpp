#pragma once

#include <stdexcept>
#include <string>

namespace slitstone {

// Base class for every error this library raises on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Basis evaluation ---------------------------------------------------------

// An expansion with a negative-homogeneity term was evaluated at the origin.
struct NegativeHomogeneityAtOrigin : Error {
    NegativeHomogeneityAtOrigin()
        : Error("expansion has negative-homogeneity terms; evaluation at the origin diverges") {}
};

// grad_u at r = 0, where the gradient of low modes is singular or undefined.
struct OriginSingularity : Error {
    OriginSingularity() : Error("gradient is singular at the origin") {}
};

// Data / profile validation ------------------------------------------------

struct LeadMismatch : Error {
    explicit LeadMismatch(const std::string& what) : Error(what) {}
};

struct CoefficientOutOfRange : Error {
    explicit CoefficientOutOfRange(const std::string& what) : Error(what) {}
};

struct LengthMismatch : Error {
    explicit LengthMismatch(const std::string& what) : Error(what) {}
};

struct ProfileNotAdmissible : Error {
    explicit ProfileNotAdmissible(const std::string& what) : Error(what) {}
};

// No admissible translation below the cap in the doubling search.
struct BarrierSearchExhausted : Error {
    explicit BarrierSearchExhausted(const std::string& what) : Error(what) {}
};

// Solver / grids ------------------------------------------------------------

struct MeshError : Error {
    explicit MeshError(const std::string& what) : Error(what) {}
};

// Expansion extraction -------------------------------------------------------

struct CircleOutsideMesh : Error {
    explicit CircleOutsideMesh(const std::string& what) : Error(what) {}
};

struct RadiusBelowContactClosure : Error {
    explicit RadiusBelowContactClosure(const std::string& what) : Error(what) {}
};

struct OriginNotInvertible : Error {
    OriginNotInvertible() : Error("Kelvin transform is undefined at the origin") {}
};

// Symmetry / classification ---------------------------------------------------

struct IllConditionedFit : Error {
    explicit IllConditionedFit(const std::string& what) : Error(what) {}
};

struct WindowMismatch : Error {
    explicit WindowMismatch(const std::string& what) : Error(what) {}
};

struct NotConverged : Error {
    explicit NotConverged(const std::string& what) : Error(what) {}
};

struct LeadingCoefficientOffUnity : Error {
    explicit LeadingCoefficientOffUnity(const std::string& what) : Error(what) {}
};

struct ContactNotHalfSpaceLike : Error {
    explicit ContactNotHalfSpaceLike(const std::string& what) : Error(what) {}
};

// Configuration ---------------------------------------------------------------

struct ConfigError : Error {
    std::string field;
    ConfigError(std::string field_, const std::string& what)
        : Error("config field '" + field_ + "': " + what), field(std::move(field_)) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace slitstone
