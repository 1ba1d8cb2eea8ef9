#pragma once

#include <stdexcept>
#include <string>

namespace stac {

/// Exception carrying a machine-readable failure kind alongside the message.
/// The kinds map one-to-one onto the failure modes of the public API; the CLI
/// translates them into process exit codes.
class Error : public std::runtime_error {
public:
    enum class Kind {
        EmptyMask,        // mask/organ set has no foreground voxel
        FullMask,         // organ set covers the whole grid, no complement
        TooLarge,         // exhaustive oracle invoked above its size guard
        TooThin,          // stencil needs >=2 voxels along every axis
        CflViolation,     // explicit time step exceeds the CFL bound
        ShapeMismatch,    // operands do not share dims/spacing
        MinorityAbsent,   // requested minority classes not present in label
        NoForeground,     // label has no nonzero class
        EmptySurface,     // surface distance on an empty mask
        InvalidArgument,  // malformed construction parameters
        ParseError,       // malformed file header
        SizeMismatch,     // payload length disagrees with header
        Unsupported,      // valid file, unsupported feature
        IoError,          // underlying read/write failure
        SpecInvalid,      // phantom specification rejected
    };

    Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

[[noreturn]] inline void fail(Error::Kind kind, const std::string& msg) {
    throw Error(kind, msg);
}

} // namespace stac
