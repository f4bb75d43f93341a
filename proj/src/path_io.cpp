#include "glevy/path_io.hpp"

#include "glevy/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace glevy {

std::string formatShortest(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

double parseDouble(const std::string& text) {
    double x = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    // from_chars rejects a leading '+', which some writers emit.
    if (first != last && *first == '+') ++first;
    auto res = std::from_chars(first, last, x);
    if (res.ec != std::errc() || res.ptr != last) throw InvalidInput("not a number: '" + text + "'");
    return x;
}

namespace {

std::vector<std::string> splitCsv(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

void writeRow(std::ostream& out, const char* kind, double t, const Point& v) {
    out << kind << ',' << formatShortest(t);
    for (double c : v) out << ',' << formatShortest(c);
    out << '\n';
}

}  // namespace

void writePathCsv(std::ostream& out, const CadlagPath& path) {
    out << "# horizon=" << formatShortest(path.horizon()) << ",dim=" << path.dim() << '\n';
    out << "kind,time";
    for (std::size_t i = 0; i < path.dim(); ++i) out << ",v" << i;
    out << '\n';
    for (std::size_t i = 0; i < path.gridTimes().size(); ++i) {
        writeRow(out, "sample", path.gridTimes()[i], path.gridValues()[i]);
    }
    for (const auto& j : path.jumps()) writeRow(out, "jump", j.time, j.size);
}

CadlagPath readPathCsv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("# horizon=", 0) != 0) {
        throw InvalidInput("path file must start with '# horizon=<T>,dim=<d>'");
    }
    auto header = splitCsv(line.substr(2));
    if (header.size() != 2 || header[0].rfind("horizon=", 0) != 0 || header[1].rfind("dim=", 0) != 0) {
        throw InvalidInput("malformed path header");
    }
    const double horizon = parseDouble(header[0].substr(8));
    const double dimValue = parseDouble(header[1].substr(4));
    if (!(dimValue >= 1.0) || dimValue != static_cast<double>(static_cast<std::size_t>(dimValue))) {
        throw InvalidInput("path dimension must be a positive integer");
    }
    const auto dim = static_cast<std::size_t>(dimValue);
    if (!std::getline(in, line) || line.rfind("kind,time", 0) != 0) {
        throw InvalidInput("path file is missing the column header");
    }
    std::vector<double> times;
    std::vector<Point> values;
    std::vector<Jump> jumps;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = splitCsv(line);
        if (fields.size() != dim + 2) throw InvalidInput("path row has the wrong number of columns");
        const double t = parseDouble(fields[1]);
        Point v(dim);
        for (std::size_t i = 0; i < dim; ++i) v[i] = parseDouble(fields[i + 2]);
        if (fields[0] == "sample") {
            times.push_back(t);
            values.push_back(std::move(v));
        } else if (fields[0] == "jump") {
            jumps.push_back(Jump{t, std::move(v)});
        } else {
            throw InvalidInput("unknown row kind '" + fields[0] + "'");
        }
    }
    return CadlagPath(horizon, std::move(times), std::move(values), std::move(jumps));
}

void savePathCsv(const std::filesystem::path& file, const CadlagPath& path) {
    std::ofstream out(file);
    if (!out) throw InvalidInput("cannot open " + file.string() + " for writing");
    writePathCsv(out, path);
}

CadlagPath loadPathCsv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw InvalidInput("cannot open " + file.string());
    return readPathCsv(in);
}

}  // namespace glevy
