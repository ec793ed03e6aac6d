#include "tgx/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace tgx {

void write_tensor(std::ostream& os, const Tensor& t) {
    os << t.order() << '\n';
    for (int k = 0; k < t.order(); ++k) {
        if (k) os << ' ';
        os << t.shape().extent(k);
    }
    os << '\n';
    os << std::setprecision(17);
    auto data = t.data();
    for (std::size_t i = 0; i < data.size(); ++i) {
        os << data[i] << (i + 1 == data.size() ? '\n' : ' ');
    }
}

Tensor read_tensor(std::istream& is) {
    int order = 0;
    if (!(is >> order) || order < 1) throw Error("bad tensor header: order");
    std::vector<Index> dims(static_cast<std::size_t>(order));
    for (Index& d : dims) {
        if (!(is >> d) || d < 1) throw Error("bad tensor header: extents");
    }
    Shape shape(std::move(dims));
    std::vector<double> data(static_cast<std::size_t>(shape.size()));
    for (double& v : data) {
        if (!(is >> v)) throw Error("tensor data truncated");
    }
    return Tensor(std::move(shape), std::move(data));
}

void write_tensor_file(const std::string& path, const Tensor& t) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open for writing: " + path);
    write_tensor(os, t);
    if (!os) throw Error("write failed: " + path);
}

Tensor read_tensor_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open for reading: " + path);
    return read_tensor(is);
}

void write_manifest(const std::string& path, const Manifest& m) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open for writing: " + path);
    for (const auto& [k, v] : m) os << k << '=' << v << '\n';
    if (!os) throw Error("write failed: " + path);
}

Manifest read_manifest(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open for reading: " + path);
    Manifest m;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw Error("malformed manifest line: " + line);
        m[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return m;
}

}  // namespace tgx
