// Copyright (c) 2026 d2dsim authors
// SPDX-License-Identifier: Apache-2.0
#include "d2dsim/csv.hpp"

#include "d2dsim/error.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace d2dsim::csv {

std::string fmt(double v)
{
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

std::string fmt(std::int64_t v)
{
    char buf[24];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

std::vector<std::string> split_line(const std::string& line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            std::size_t end = i;
            // tolerate trailing CR from windows-style exports
            if (end > start && line[end - 1] == '\r')
                --end;
            out.emplace_back(line.substr(start, end - start));
            start = i + 1;
        }
    }
    return out;
}

namespace {

double parse_double(const std::string& s, const std::string& context)
{
    double v = 0;
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e)
        throw ValidationError("bad numeric field '" + s + "' in " + context);
    return v;
}

} // namespace

void write_matrix(const std::filesystem::path& p, const Mat& m)
{
    std::ostringstream os;
    os << "community_id";
    for (std::size_t j = 0; j < m.cols(); ++j)
        os << ',' << j;
    os << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        os << i;
        for (std::size_t j = 0; j < m.cols(); ++j)
            os << ',' << fmt(m(i, j));
        os << '\n';
    }
    write_text(p, os.str());
}

Mat read_matrix(const std::filesystem::path& p)
{
    std::ifstream in(p);
    if (!in)
        throw ValidationError("cannot open " + p.string());
    std::string line;
    if (!std::getline(in, line))
        throw ValidationError("empty matrix file " + p.string());
    const std::size_t cols = split_line(line).size() - 1;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        auto f = split_line(line);
        if (f.size() != cols + 1)
            throw ValidationError("ragged row in " + p.string());
        std::vector<double> r(cols);
        for (std::size_t j = 0; j < cols; ++j)
            r[j] = parse_double(f[j + 1], p.string());
        rows.push_back(std::move(r));
    }
    Mat m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = rows[i][j];
    return m;
}

void write_vector(const std::filesystem::path& p, const std::vector<double>& v,
                  const std::string& value_name)
{
    std::ostringstream os;
    os << "community_id," << value_name << '\n';
    for (std::size_t i = 0; i < v.size(); ++i)
        os << i << ',' << fmt(v[i]) << '\n';
    write_text(p, os.str());
}

std::vector<double> read_vector(const std::filesystem::path& p)
{
    std::ifstream in(p);
    if (!in)
        throw ValidationError("cannot open " + p.string());
    std::string line;
    std::getline(in, line); // header
    std::vector<double> out;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        auto f = split_line(line);
        if (f.size() != 2)
            throw ValidationError("bad vector row in " + p.string());
        out.push_back(parse_double(f[1], p.string()));
    }
    return out;
}

void write_text(const std::filesystem::path& p, const std::string& text)
{
    if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw ValidationError("cannot write " + p.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

std::string read_text(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw ValidationError("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace d2dsim::csv
