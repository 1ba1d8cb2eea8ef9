#include "stac/mhd_io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace stac {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

struct ParsedHeader {
    std::map<std::string, std::string> keys;
    std::filesystem::path dir;
};

ParsedHeader parse_header(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(Error::Kind::IoError, "cannot open header: " + path.string());

    ParsedHeader h;
    h.dir = path.parent_path();
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(Error::Kind::ParseError, "header line lacks '=': " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(Error::Kind::ParseError, "header line lacks a key");
        h.keys[key] = value;
    }
    return h;
}

std::vector<double> parse_numbers(const std::string& value, const char* key) {
    std::istringstream ss(value);
    std::vector<double> out;
    double v;
    while (ss >> v) out.push_back(v);
    if (!ss.eof())
        fail(Error::Kind::ParseError, std::string(key) + " holds a non-numeric token");
    if (out.empty()) fail(Error::Kind::ParseError, std::string(key) + " holds no values");
    return out;
}

std::vector<unsigned char> read_payload(const std::filesystem::path& path,
                                        std::size_t expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Error::Kind::IoError, "cannot open payload: " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() != expected)
        fail(Error::Kind::SizeMismatch,
             "payload " + path.string() + " holds " + std::to_string(bytes.size()) +
                 " bytes, header implies " + std::to_string(expected));
    return bytes;
}

// Payloads are little-endian on disk; swap on big-endian hosts.
void to_host_f32(std::vector<unsigned char>& bytes) {
    if constexpr (std::endian::native == std::endian::big) {
        for (std::size_t i = 0; i + 3 < bytes.size(); i += 4) {
            std::swap(bytes[i], bytes[i + 3]);
            std::swap(bytes[i + 1], bytes[i + 2]);
        }
    }
}

void atomic_write(const std::filesystem::path& path, const void* data, std::size_t size) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(Error::Kind::IoError, "cannot create " + tmp.string());
        out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            fail(Error::Kind::IoError, "short write to " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        fail(Error::Kind::IoError, "cannot rename into place: " + path.string());
    }
}

std::filesystem::path raw_path_for(const std::filesystem::path& header) {
    std::filesystem::path p = header;
    p.replace_extension(".raw");
    return p;
}

GridShape shape_from_header(const ParsedHeader& h) {
    if (const auto it = h.keys.find("ObjectType"); it != h.keys.end() && it->second != "Image")
        fail(Error::Kind::Unsupported, "ObjectType must be Image, got " + it->second);
    if (const auto it = h.keys.find("NDims"); it != h.keys.end() && it->second != "3")
        fail(Error::Kind::Unsupported, "NDims must be 3, got " + it->second);
    if (const auto it = h.keys.find("CompressedData");
        it != h.keys.end() && it->second != "False")
        fail(Error::Kind::Unsupported, "compressed payloads are not supported");
    for (const char* key : {"ElementByteOrderMSB", "BinaryDataByteOrderMSB"})
        if (const auto it = h.keys.find(key); it != h.keys.end() && it->second != "False")
            fail(Error::Kind::Unsupported, "big-endian payloads are not supported");

    const auto dim_it = h.keys.find("DimSize");
    if (dim_it == h.keys.end()) fail(Error::Kind::ParseError, "header lacks DimSize");
    const auto dims = parse_numbers(dim_it->second, "DimSize");
    if (dims.size() != 3)
        fail(Error::Kind::Unsupported, "DimSize must have 3 components (NDims != 3?)");

    GridShape s;
    s.nx = static_cast<int>(dims[0]);
    s.ny = static_cast<int>(dims[1]);
    s.nz = static_cast<int>(dims[2]);
    if (s.nx <= 0 || s.ny <= 0 || s.nz <= 0 || dims[0] != s.nx || dims[1] != s.ny ||
        dims[2] != s.nz)
        fail(Error::Kind::ParseError, "DimSize components must be positive integers");

    if (const auto it = h.keys.find("ElementSpacing"); it != h.keys.end()) {
        const auto sp = parse_numbers(it->second, "ElementSpacing");
        if (sp.size() != 3) fail(Error::Kind::ParseError, "ElementSpacing needs 3 values");
        s.sx = sp[0];
        s.sy = sp[1];
        s.sz = sp[2];
        if (!(s.sx > 0) || !(s.sy > 0) || !(s.sz > 0))
            fail(Error::Kind::ParseError, "ElementSpacing must be positive");
    }
    return s;
}

std::filesystem::path payload_path(const ParsedHeader& h) {
    const auto it = h.keys.find("ElementDataFile");
    if (it == h.keys.end()) fail(Error::Kind::ParseError, "header lacks ElementDataFile");
    if (it->second == "LOCAL" || it->second == "LIST")
        fail(Error::Kind::Unsupported, "ElementDataFile " + it->second + " is not supported");
    return h.dir / it->second;
}

std::string format_spacing(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_pair(const GridShape& s, const char* element_type, const void* payload,
                std::size_t payload_size, const std::filesystem::path& path) {
    const std::filesystem::path raw = raw_path_for(path);
    atomic_write(raw, payload, payload_size);

    std::ostringstream header;
    header << "ObjectType = Image\n"
           << "NDims = 3\n"
           << "DimSize = " << s.nx << ' ' << s.ny << ' ' << s.nz << '\n'
           << "ElementSpacing = " << format_spacing(s.sx) << ' ' << format_spacing(s.sy)
           << ' ' << format_spacing(s.sz) << '\n'
           << "ElementType = " << element_type << '\n'
           << "ElementByteOrderMSB = False\n"
           << "ElementDataFile = " << raw.filename().string() << '\n';
    const std::string text = header.str();
    atomic_write(path, text.data(), text.size());
}

} // namespace

AnyVolume read_volume(const std::filesystem::path& path) {
    const ParsedHeader h = parse_header(path);
    const GridShape s = shape_from_header(h);

    const auto type_it = h.keys.find("ElementType");
    if (type_it == h.keys.end()) fail(Error::Kind::ParseError, "header lacks ElementType");
    const std::string& type = type_it->second;
    const std::filesystem::path raw = payload_path(h);

    if (type == "MET_UCHAR") {
        auto bytes = read_payload(raw, s.voxel_count());
        LabelVolume vol(s);
        std::memcpy(vol.data.data(), bytes.data(), bytes.size());
        return vol;
    }
    if (type == "MET_FLOAT") {
        auto bytes = read_payload(raw, s.voxel_count() * 4);
        to_host_f32(bytes);
        ScalarVolume vol(s);
        std::memcpy(vol.data.data(), bytes.data(), bytes.size());
        for (float v : vol.data)
            if (!std::isfinite(v))
                fail(Error::Kind::ParseError,
                     "scalar payload holds non-finite values: " + raw.string());
        return vol;
    }
    fail(Error::Kind::Unsupported, "ElementType " + type + " is not supported");
}

ScalarVolume read_scalar_volume(const std::filesystem::path& path) {
    AnyVolume any = read_volume(path);
    if (auto* v = std::get_if<ScalarVolume>(&any)) return std::move(*v);
    fail(Error::Kind::Unsupported, path.string() + " holds labels, expected MET_FLOAT");
}

LabelVolume read_label_volume(const std::filesystem::path& path) {
    AnyVolume any = read_volume(path);
    if (auto* v = std::get_if<LabelVolume>(&any)) return std::move(*v);
    fail(Error::Kind::Unsupported, path.string() + " holds scalars, expected MET_UCHAR");
}

void write_volume(const ScalarVolume& vol, const std::filesystem::path& path) {
    vol.shape.validate();
    if constexpr (std::endian::native == std::endian::big) {
        std::vector<unsigned char> bytes(vol.data.size() * 4);
        std::memcpy(bytes.data(), vol.data.data(), bytes.size());
        to_host_f32(bytes); // same swap both directions
        write_pair(vol.shape, "MET_FLOAT", bytes.data(), bytes.size(), path);
        return;
    }
    write_pair(vol.shape, "MET_FLOAT", vol.data.data(), vol.data.size() * 4, path);
}

void write_volume(const LabelVolume& vol, const std::filesystem::path& path) {
    vol.shape.validate();
    write_pair(vol.shape, "MET_UCHAR", vol.data.data(), vol.data.size(), path);
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t hash = 0xCBF29CE484222325ull;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= bytes[i];
        hash *= 0x100000001B3ull;
    }
    return hash;
}

std::string fnv1a64_hex(const void* data, std::size_t size) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(data, size)));
    return buf;
}

} // namespace stac
