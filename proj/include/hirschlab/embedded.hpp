#pragma once

#include <cstddef>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hirschlab/embedded_data.inc"
#include "hirschlab/error.hpp"
#include "hirschlab/hrep.hpp"

namespace hirschlab {

/// Removal indices j for which a cube construction is published.
inline const std::vector<std::size_t>& published_indices()
{
    static const std::vector<std::size_t> indices = [] {
        std::vector<std::size_t> v;
        for (std::size_t j = 0; j <= 11; ++j)
            v.push_back(j);
        for (std::size_t j = 20; j <= 32; ++j)
            v.push_back(j);
        return v;
    }();
    return indices;
}

inline bool is_published_index(std::size_t j)
{
    return j <= 11 || (j >= 20 && j <= 32);
}

inline std::string cube_file_name(std::size_t j)
{
    std::string n = std::to_string(j);
    return "cube_" + std::string(n.size() < 2 ? 2 - n.size() : 0, '0') + n + ".cube";
}

inline std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

/**
 * Contents of a shipped data file. When HIRSCHLAB_DATA is set the file is
 * read from that directory instead of the copy compiled into the binary.
 */
inline std::string data_file(std::string_view name)
{
    if (const char* dir = std::getenv("HIRSCHLAB_DATA"); dir && *dir)
        return read_text_file(std::filesystem::path(dir) / std::string(name));
    for (const auto& [file, content] : detail::kEmbeddedFiles)
        if (file == name)
            return std::string(content);
    throw DataError("no embedded data file '" + std::string(name) + "'");
}

/// The 40-inequality spindle, labels I_0 .. I_39.
inline HPolyhedron embedded_N()
{
    return parse_hine(data_file("N.hine"));
}

inline Dataset embedded_dataset(std::size_t j)
{
    if (!is_published_index(j))
        throw DataError("no dataset for removed inequality " + std::to_string(j));
    return Dataset{j, parse_cube(data_file(cube_file_name(j)))};
}

}  // namespace hirschlab
