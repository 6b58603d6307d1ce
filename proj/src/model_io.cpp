#include "greedyid/model_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <json.hpp>

namespace greedyid {

namespace {

using nlohmann::json;

json encode_matrix(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

cplx decode_entry(const json& e, const std::string& field) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw ParseError("model file: field \"" + field + "\" entries must be [re, im] pairs");
    return {e[0].get<double>(), e[1].get<double>()};
}

Matrix decode_matrix(const json& doc, const std::string& field, Eigen::Index rows,
                     Eigen::Index cols) {
    if (!doc.contains(field)) throw ParseError("model file: missing field \"" + field + "\"");
    const json& arr = doc[field];
    if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != rows)
        throw DimensionMismatch("model file: field \"" + field + "\" has the wrong row count");
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = arr[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw DimensionMismatch("model file: field \"" + field +
                                    "\" has the wrong column count");
        for (Eigen::Index j = 0; j < cols; ++j)
            m(i, j) = decode_entry(row[static_cast<std::size_t>(j)], field);
    }
    return m;
}

json parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw ParseError(path + " is not valid JSON");
    return doc;
}

}  // namespace

void save_model(const std::string& path, const StateSpace& m) {
    m.validate();
    json doc;
    doc["order"] = m.order();
    doc["domain"] = m.domain == Domain::discrete ? "discrete" : "continuous";
    doc["sample_time"] = m.sample_time;
    doc["E"] = encode_matrix(m.E);
    doc["A"] = encode_matrix(m.A);
    doc["B"] = encode_matrix(m.B);
    doc["C"] = encode_matrix(m.C);
    doc["D"] = json::array({m.D.real(), m.D.imag()});
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << doc.dump(1) << "\n";
}

StateSpace load_model(const std::string& path) {
    const json doc = parse_file(path);
    if (!doc.is_object()) throw ParseError(path + ": top level must be an object");
    if (!doc.contains("order") || !doc["order"].is_number_integer())
        throw ParseError("model file: missing integer field \"order\"");
    const auto order = doc["order"].get<Eigen::Index>();
    if (order < 0) throw ParseError("model file: \"order\" must be >= 0");
    if (!doc.contains("domain") || !doc["domain"].is_string())
        throw ParseError("model file: missing string field \"domain\"");
    const std::string domain = doc["domain"].get<std::string>();
    if (domain != "continuous" && domain != "discrete")
        throw ParseError("model file: \"domain\" must be \"continuous\" or \"discrete\"");

    StateSpace m;
    m.domain = domain == "discrete" ? Domain::discrete : Domain::continuous;
    if (doc.contains("sample_time") && !doc["sample_time"].is_number())
        throw ParseError("model file: \"sample_time\" must be a number");
    m.sample_time = doc.contains("sample_time") ? doc["sample_time"].get<double>() : 0.0;
    m.E = decode_matrix(doc, "E", order, order);
    m.A = decode_matrix(doc, "A", order, order);
    m.B = decode_matrix(doc, "B", order, 1);
    m.C = decode_matrix(doc, "C", 1, order);
    if (!doc.contains("D")) throw ParseError("model file: missing field \"D\"");
    m.D = decode_entry(doc["D"], "D");
    m.refresh_real_flag();
    m.validate();
    return m;
}

void save_trace(const std::string& path, const DiscreteTrace& t) {
    t.validate();
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << "p, u_re, u_im, y_re, y_im\n" << std::setprecision(17);
    for (std::size_t p = 0; p < t.length(); ++p)
        out << p << ", " << t.u[p].real() << ", " << t.u[p].imag() << ", " << t.y[p].real()
            << ", " << t.y[p].imag() << "\n";
    json meta;
    meta["sample_time"] = t.sample_time;
    meta["k_min"] = t.k_min;
    std::ofstream mout(path + ".meta.json");
    if (!mout) throw ConfigError("cannot write " + path + ".meta.json");
    mout << meta.dump(1) << "\n";
}

DiscreteTrace load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    DiscreteTrace t;
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": missing header");
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::size_t p = 0;
        double ur = 0.0, ui = 0.0, yr = 0.0, yi = 0.0;
        char sep = ',';
        if (!(ss >> p >> sep >> ur >> sep >> ui >> sep >> yr >> sep >> yi))
            throw ParseError(path + ": bad row " + std::to_string(row));
        if (p != row) throw ParseError(path + ": rows out of order at " + std::to_string(row));
        t.u.emplace_back(ur, ui);
        t.y.emplace_back(yr, yi);
        ++row;
    }
    const json meta = parse_file(path + ".meta.json");
    if (!meta.contains("sample_time") || !meta["sample_time"].is_number() ||
        !meta.contains("k_min") || !meta["k_min"].is_number_unsigned())
        throw ParseError(path + ".meta.json: needs numeric sample_time and k_min");
    t.sample_time = meta["sample_time"].get<double>();
    t.k_min = meta["k_min"].get<std::size_t>();
    t.validate();
    return t;
}

}  // namespace greedyid
