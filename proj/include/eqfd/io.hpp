#pragma once

#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>

#include "eqfd/error.hpp"

namespace eqfd {

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double v) {
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw InputError("format_double: conversion failed");
    return std::string(buf.data(), end);
}

struct ShortestFormat {
    std::string operator()(double v) const { return format_double(v); }
};

/// Opens a file for writing, creating parent directories; throws std::runtime_error on failure.
inline std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    return os;
}

}  // namespace eqfd
