#pragma once
// Exception types shared by every layer of the engine.

#include <stdexcept>
#include <string>

namespace ckn {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed concept path or atom (reserved T, empty name, illegal characters).
struct InvalidConcept : Error {
    using Error::Error;
};

// A concept that does not exist in the knowledge base.
struct UnknownConcept : Error {
    explicit UnknownConcept(const std::string& name)
        : Error("unknown concept: " + name), concept_name(name) {}
    std::string concept_name;
};

// Folding an empty set of interaction signs.
struct NoPath : Error {
    NoPath() : Error("no path: cannot fold an empty sequence of interactions") {}
};

struct FreezeError : Error {
    using Error::Error;
};

struct SnapshotError : Error {
    using Error::Error;
};

struct FormulationError : Error {
    using Error::Error;
};

struct QueryError : Error {
    using Error::Error;
};

}  // namespace ckn
