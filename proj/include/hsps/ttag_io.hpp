// Copyright 2026 The hsps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// TTAG time-tag files.
//
// Binary layout, all integers little-endian:
//
//   offset  size  field
//   0       4     magic "TTAG"
//   4       2     format version (u16) = 1
//   6       8     duration_ps (u64)
//   14      9*N   records { channel u8, time_ps i64 }
//
// Records are in stream order (time ascending, channel code ascending on
// ties). Paths ending in ".csv" use a text form instead: a `channel,time_ps`
// header row followed by one row per tag, with duration carried in a leading
// `# duration_ps=<n>` comment line.

#pragma once

#include <array>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "hsps/errors.hpp"
#include "hsps/timetag.hpp"

namespace hsps {

namespace ttag {

inline constexpr std::array<char, 4> magic{'T', 'T', 'A', 'G'};
inline constexpr std::uint16_t version = 1;
inline constexpr std::size_t header_size = 14;
inline constexpr std::size_t record_size = 9;

namespace detail {

template <typename T>
inline void put_le(unsigned char *dst, T value) noexcept {
    auto u = static_cast<std::make_unsigned_t<T>>(value);
    for (std::size_t k = 0; k < sizeof(T); ++k)
        dst[k] = static_cast<unsigned char>((u >> (8 * k)) & 0xffU);
}

template <typename T>
[[nodiscard]] inline auto get_le(const unsigned char *src) noexcept -> T {
    std::make_unsigned_t<T> u = 0;
    for (std::size_t k = 0; k < sizeof(T); ++k)
        u |= static_cast<std::make_unsigned_t<T>>(src[k]) << (8 * k);
    return static_cast<T>(u);
}

[[nodiscard]] inline auto is_csv_path(const std::filesystem::path &path) -> bool {
    auto ext = path.extension().string();
    for (auto &ch : ext)
        ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return ext == ".csv";
}

inline void write_binary(const TagStream &stream, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw io_error("cannot open " + path.string() + " for writing");

    std::array<unsigned char, header_size> header{};
    std::memcpy(header.data(), magic.data(), magic.size());
    put_le<std::uint16_t>(header.data() + 4, version);
    put_le<std::uint64_t>(header.data() + 6, static_cast<std::uint64_t>(stream.duration_ps()));
    out.write(reinterpret_cast<const char *>(header.data()), header.size());

    constexpr std::size_t block_records = 1 << 16;
    std::vector<unsigned char> buf;
    buf.reserve(block_records * record_size);
    auto flush = [&] {
        out.write(reinterpret_cast<const char *>(buf.data()),
                  static_cast<std::streamsize>(buf.size()));
        buf.clear();
    };
    for (const auto &t : stream.tags()) {
        const auto at = buf.size();
        buf.resize(at + record_size);
        buf[at] = channel_code(t.channel);
        put_le<std::int64_t>(buf.data() + at + 1, t.time_ps);
        if (buf.size() == block_records * record_size)
            flush();
    }
    flush();
    out.flush();
    if (!out)
        throw io_error("write failed for " + path.string());
}

[[nodiscard]] inline auto read_binary(const std::filesystem::path &path) -> TagStream {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw io_error("cannot open " + path.string());

    std::array<unsigned char, header_size> header{};
    in.read(reinterpret_cast<char *>(header.data()), header.size());
    const auto got = static_cast<std::size_t>(in.gcount());
    if (got < magic.size() || std::memcmp(header.data(), magic.data(), magic.size()) != 0)
        throw format_error("bad magic, expected \"TTAG\"", 0);
    if (got < header_size)
        throw format_error("truncated header", got);
    if (const auto v = get_le<std::uint16_t>(header.data() + 4); v != version)
        throw format_error("unsupported format version " + std::to_string(v), 4);
    const auto duration_u = get_le<std::uint64_t>(header.data() + 6);
    if (duration_u > static_cast<std::uint64_t>(INT64_MAX))
        throw format_error("duration_ps does not fit in i64", 6);
    const auto duration = static_cast<std::int64_t>(duration_u);

    std::vector<TimeTag> tags;
    if (std::error_code ec; std::filesystem::file_size(path, ec) >= header_size && !ec)
        tags.reserve((std::filesystem::file_size(path) - header_size) / record_size);

    constexpr std::size_t block_records = 1 << 16;
    std::vector<unsigned char> buf(block_records * record_size);
    std::uint64_t offset = header_size;
    std::size_t carry = 0;
    for (;;) {
        in.read(reinterpret_cast<char *>(buf.data() + carry),
                static_cast<std::streamsize>(buf.size() - carry));
        const std::size_t avail = carry + static_cast<std::size_t>(in.gcount());
        const std::size_t whole = avail / record_size;
        for (std::size_t r = 0; r < whole; ++r, offset += record_size) {
            const unsigned char *rec = buf.data() + r * record_size;
            const auto ch = channel_from_code(rec[0]);
            if (!ch)
                throw format_error("unknown channel code " + std::to_string(rec[0]), offset);
            const TimeTag t{*ch, get_le<std::int64_t>(rec + 1)};
            if (t.time_ps < 0 || t.time_ps >= duration)
                throw format_error("time_ps " + std::to_string(t.time_ps) +
                                       " outside [0, duration_ps)",
                                   offset + 1);
            if (!tags.empty() && tag_before(t, tags.back()))
                throw format_error("tags not sorted", offset);
            tags.push_back(t);
        }
        carry = avail - whole * record_size;
        if (carry > 0)
            std::memmove(buf.data(), buf.data() + whole * record_size, carry);
        if (!in) {
            if (carry != 0)
                throw format_error("truncated record", offset);
            break;
        }
    }
    return TagStream(duration, std::move(tags));
}

inline void write_csv(const TagStream &stream, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw io_error("cannot open " + path.string() + " for writing");
    out << "# duration_ps=" << stream.duration_ps() << "\n";
    out << "channel,time_ps\n";
    std::string line;
    for (const auto &t : stream.tags()) {
        line.clear();
        line += std::to_string(channel_code(t.channel));
        line += ',';
        line += std::to_string(t.time_ps);
        line += '\n';
        out << line;
    }
    out.flush();
    if (!out)
        throw io_error("write failed for " + path.string());
}

template <typename Int>
[[nodiscard]] inline auto parse_int(std::string_view s, Int &out) -> bool {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    if (s.empty())
        return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && p == s.data() + s.size();
}

[[nodiscard]] inline auto read_csv(const std::filesystem::path &path) -> TagStream {
    std::ifstream in(path);
    if (!in)
        throw io_error("cannot open " + path.string());
    std::string line;
    std::uint64_t offset = 0;
    std::int64_t duration = -1;
    bool saw_header = false;
    std::vector<TimeTag> tags;
    while (std::getline(in, line)) {
        const std::uint64_t line_offset = offset;
        offset += line.size() + 1;
        std::string_view sv(line);
        if (!sv.empty() && sv.back() == '\r')
            sv.remove_suffix(1);
        if (sv.empty())
            continue;
        if (sv.front() == '#') {
            constexpr std::string_view key = "# duration_ps=";
            if (sv.starts_with(key)) {
                if (saw_header)
                    throw format_error("duration_ps comment must precede the header row",
                                       line_offset);
                if (!parse_int(sv.substr(key.size()), duration) || duration < 0)
                    throw format_error("bad duration_ps comment", line_offset);
            }
            continue;
        }
        if (!saw_header) {
            if (sv != "channel,time_ps")
                throw format_error("expected header row \"channel,time_ps\"", line_offset);
            saw_header = true;
            continue;
        }
        const auto comma = sv.find(',');
        unsigned code = 0;
        std::int64_t time = 0;
        if (comma == std::string_view::npos || !parse_int(sv.substr(0, comma), code) ||
            !parse_int(sv.substr(comma + 1), time))
            throw format_error("malformed record", line_offset);
        const auto ch = code <= 0xff ? channel_from_code(static_cast<std::uint8_t>(code))
                                     : std::nullopt;
        if (!ch)
            throw format_error("unknown channel code " + std::to_string(code), line_offset);
        const TimeTag t{*ch, time};
        if (time < 0 || (duration >= 0 && time >= duration))
            throw format_error("time_ps outside [0, duration_ps)", line_offset);
        if (!tags.empty() && tag_before(t, tags.back()))
            throw format_error("tags not sorted", line_offset);
        tags.push_back(t);
    }
    if (!saw_header)
        throw format_error("missing header row", 0);
    if (duration < 0) {
        // Without a duration comment, the acquisition is taken to end just
        // after the last tag.
        duration = tags.empty() ? 0 : tags.back().time_ps + 1;
    }
    return TagStream(duration, std::move(tags));
}

}  // namespace detail

}  // namespace ttag

/// Writes `stream` as TTAG binary, or CSV when the path ends in ".csv".
inline void write_tags(const TagStream &stream, const std::filesystem::path &path) {
    if (ttag::detail::is_csv_path(path))
        ttag::detail::write_csv(stream, path);
    else
        ttag::detail::write_binary(stream, path);
}

/// Reads a stream written by write_tags (or any conforming producer).
/// Throws format_error with the offending byte offset on malformed input.
[[nodiscard]] inline auto read_tags(const std::filesystem::path &path) -> TagStream {
    if (ttag::detail::is_csv_path(path))
        return ttag::detail::read_csv(path);
    return ttag::detail::read_binary(path);
}

}  // namespace hsps
