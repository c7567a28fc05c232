#include "kdv/field_io.hpp"

#include "kdv/errors.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace kdv {

void write_field_file(const std::string& path, const Field& f,
                      const std::vector<std::string>& extra_comments) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";

    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw Error("write_field_file: cannot open " + tmp.string());
        out << "# kdv-field N=" << f.size() << "\n";
        for (const auto& c : extra_comments) out << "# " << c << "\n";
        char buf[64];
        for (double v : f.samples()) {
            std::snprintf(buf, sizeof buf, "%.17e\n", v);
            out << buf;
        }
        out.flush();
        if (!out) throw Error("write_field_file: write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw Error("write_field_file: rename failed: " + ec.message());
}

FieldFileData read_field_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FieldFormatError("read_field_file: cannot open " + path);

    std::string line;
    if (!std::getline(in, line))
        throw FieldFormatError("read_field_file: empty file " + path);

    std::size_t n = 0;
    {
        std::istringstream hs(line);
        std::string hash, tag, nfield;
        hs >> hash >> tag >> nfield;
        if (hash != "#" || tag != "kdv-field" || nfield.rfind("N=", 0) != 0)
            throw FieldFormatError("read_field_file: bad header in " + path);
        char* end = nullptr;
        unsigned long long nv = std::strtoull(nfield.c_str() + 2, &end, 10);
        if (!end || *end != '\0' || nv == 0)
            throw FieldFormatError("read_field_file: bad N in header of " + path);
        n = static_cast<std::size_t>(nv);
    }

    FieldFileData data;
    data.n = n;
    data.samples.reserve(n);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (!data.samples.empty())
                throw FieldFormatError("read_field_file: comment between samples in " + path);
            data.comments.push_back(line);
            continue;
        }
        char* end = nullptr;
        errno = 0;
        double v = std::strtod(line.c_str(), &end);
        while (end && *end != '\0' && std::isspace(static_cast<unsigned char>(*end))) ++end;
        if (!end || *end != '\0' || errno == ERANGE)
            throw FieldFormatError("read_field_file: bad sample line in " + path);
        if (!std::isfinite(v))
            throw FieldFormatError("read_field_file: non-finite sample in " + path);
        data.samples.push_back(v);
    }
    if (data.samples.size() != n)
        throw FieldFormatError("read_field_file: expected " + std::to_string(n) +
                               " samples, found " + std::to_string(data.samples.size()) +
                               " in " + path);
    return data;
}

Field read_field(const std::string& path, std::shared_ptr<const SpectralGrid> grid) {
    FieldFileData data = read_field_file(path);
    if (grid) {
        if (grid->size() != data.n)
            throw FieldFormatError("read_field: file N=" + std::to_string(data.n) +
                                   " does not match grid N=" + std::to_string(grid->size()));
    } else {
        grid = SpectralGrid::create(data.n);
    }
    return Field::from_samples(std::move(grid), std::move(data.samples));
}

} // namespace kdv
