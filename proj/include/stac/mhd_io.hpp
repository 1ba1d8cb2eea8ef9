#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>

#include "stac/volume.hpp"

namespace stac {

/// A volume read from disk: MET_FLOAT payloads land in a ScalarVolume,
/// MET_UCHAR payloads in a LabelVolume.
using AnyVolume = std::variant<ScalarVolume, LabelVolume>;

/// Reads a MetaImage (MHD/RAW) pair. Header keys are parsed case-sensitively,
/// one `Key = Value` per line; the raw payload is x-fastest, little-endian.
///
/// Throws ParseError (malformed header, non-finite scalar payload),
/// SizeMismatch (payload length disagrees with DimSize), Unsupported
/// (element types other than MET_UCHAR/MET_FLOAT, NDims != 3, big-endian,
/// compressed or LOCAL/LIST payloads), IoError (unreadable files).
AnyVolume read_volume(const std::filesystem::path& path);

/// Convenience wrappers that fail with Unsupported when the file holds the
/// other volume kind.
ScalarVolume read_scalar_volume(const std::filesystem::path& path);
LabelVolume read_label_volume(const std::filesystem::path& path);

/// Writes an MHD header plus RAW payload pair. Scalars are 32-bit IEEE-754
/// little-endian, labels unsigned 8-bit. The payload sits next to the header
/// with the extension replaced by ".raw". Both files are written to a
/// temporary name and atomically renamed, so failures never leave truncated
/// volumes behind.
void write_volume(const ScalarVolume& vol, const std::filesystem::path& path);
void write_volume(const LabelVolume& vol, const std::filesystem::path& path);

/// FNV-1a 64-bit digest, as a fixed-width hex string. Used for provenance.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::string fnv1a64_hex(const void* data, std::size_t size);

} // namespace stac
