#include "cbnorm/io.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace cbnorm {

namespace {

using nlohmann::json;

int line_of_offset(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

[[noreturn]] void fail(const std::string& origin, const std::string& msg, int line = 0) {
    std::string full = origin + ": " + msg;
    if (line > 0) full += " (line " + std::to_string(line) + ")";
    throw ParseError(full, line);
}

const json& require_object(const json& doc, const char* field, const std::string& origin) {
    if (!doc.contains(field)) fail(origin, std::string("missing field \"") + field + '"');
    const json& v = doc.at(field);
    if (!v.is_object()) fail(origin, std::string("field \"") + field + "\" must be an object");
    return v;
}

int require_dim(const json& dims, const char* field, const std::string& origin) {
    const std::string name = std::string("dims.") + field;
    if (!dims.contains(field)) fail(origin, "missing field \"" + name + '"');
    const json& v = dims.at(field);
    if (!v.is_number_integer() || v.template get<long long>() <= 0 ||
        v.template get<long long>() > 4096)
        fail(origin, "field \"" + name + "\" must be a positive integer");
    return v.template get<int>();
}

ComplexMatrix require_matrix(const json& mats, const char* field, int rows, int cols,
                             const std::string& origin) {
    const std::string name = std::string("matrices.") + field;
    if (!mats.contains(field)) fail(origin, "missing field \"" + name + '"');
    const json& v = mats.at(field);
    const std::string where = "field \"" + name + '"';
    if (!v.is_array() || static_cast<int>(v.size()) != rows)
        fail(origin, where + " must be an array of " + std::to_string(rows) + " rows");
    ComplexMatrix out(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const json& row = v.at(i);
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            fail(origin, where + " row " + std::to_string(i) + " must have " +
                             std::to_string(cols) + " entries");
        for (int j = 0; j < cols; ++j) {
            const json& e = row.at(j);
            if (!e.is_array() || e.size() != 2 || !e.at(0).is_number() || !e.at(1).is_number())
                fail(origin, where + " entry (" + std::to_string(i) + "," + std::to_string(j) +
                                 ") must be a two-element [re, im] array");
            out(i, j) = Complex(e.at(0).template get<double>(), e.at(1).template get<double>());
        }
    }
    if (!out.all_finite()) fail(origin, where + " has non-finite entries");
    return out;
}

}  // namespace

ChannelRep InputDocument::to_channel() const {
    if (kind == "stinespring")
        return ChannelRep(StinespringPair(matrices.at(0), matrices.at(1), m, k));
    if (kind == "choi") return ChannelRep(ChoiMatrix(matrices.at(0), n, m));
    throw Error("input of kind \"" + kind + "\" does not describe a channel");
}

InputDocument parse_input(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(origin, std::string("invalid JSON: ") + e.what(), line_of_offset(text, e.byte));
    } catch (const json::exception& e) {
        // e.g. number overflow; no byte position available on this path
        fail(origin, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail(origin, "top-level value must be an object");
    if (!doc.contains("kind")) fail(origin, "missing field \"kind\"");
    if (!doc.at("kind").is_string()) fail(origin, "field \"kind\" must be a string");

    InputDocument out;
    out.kind = doc.at("kind").template get<std::string>();
    if (out.kind != "density-pair" && out.kind != "stinespring" && out.kind != "choi")
        fail(origin, "unknown kind \"" + out.kind +
                         "\"; expected density-pair, stinespring or choi");
    const json& dims = require_object(doc, "dims", origin);
    const json& mats = require_object(doc, "matrices", origin);
    if (out.kind == "density-pair") {
        out.n = require_dim(dims, "n", origin);
        out.matrices.push_back(require_matrix(mats, "P", out.n, out.n, origin));
        out.matrices.push_back(require_matrix(mats, "Q", out.n, out.n, origin));
    } else if (out.kind == "stinespring") {
        out.n = require_dim(dims, "n", origin);
        out.m = require_dim(dims, "m", origin);
        out.k = require_dim(dims, "k", origin);
        out.matrices.push_back(require_matrix(mats, "A0", out.m * out.k, out.n, origin));
        out.matrices.push_back(require_matrix(mats, "A1", out.m * out.k, out.n, origin));
    } else {
        out.n = require_dim(dims, "n", origin);
        out.m = require_dim(dims, "m", origin);
        const int d = out.m * out.n;
        out.matrices.push_back(require_matrix(mats, "J", d, d, origin));
    }
    return out;
}

InputDocument load_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file", 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_input(buf.str(), path);
}

}  // namespace cbnorm
