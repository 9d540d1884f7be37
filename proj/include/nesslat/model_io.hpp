#pragma once

#include "nesslat/doc_parser.hpp"
#include "nesslat/model.hpp"

#include <cstdio>
#include <sstream>

namespace nesslat {

namespace detail {

// nested arrays of [re, im] pairs, row-major
inline Mat matrix_from_doc(const DocValue& v, const std::string& what) {
    if (!v.is_array() || v.arr().empty())
        throw std::invalid_argument(what + ": expected a non-empty nested array");
    const auto& rows = v.arr();
    const size_t n = rows.size();
    Mat m(n, n);
    for (size_t i = 0; i < n; ++i) {
        if (!rows[i].is_array() || rows[i].arr().size() != n)
            throw std::invalid_argument(what + ": row " + std::to_string(i) +
                                        " must hold " + std::to_string(n) + " entries (square matrix)");
        for (size_t j = 0; j < n; ++j) {
            const auto& e = rows[i].arr()[j];
            if (!e.is_array() || e.arr().size() != 2 || !e.arr()[0].is_number() ||
                !e.arr()[1].is_number())
                throw std::invalid_argument(what + ": entry (" + std::to_string(i) + "," +
                                            std::to_string(j) + ") must be a [re, im] pair");
            m(i, j) = cd(e.arr()[0].num(), e.arr()[1].num());
        }
    }
    return m;
}

} // namespace detail

inline ModelSpec model_from_document(const Document& doc) {
    const auto* sec = doc.find_section("model");
    if (!sec) throw std::invalid_argument("model file: missing [model] section");

    if (const auto* b = doc.find("model", "builtin")) {
        if (!b->is_string()) throw std::invalid_argument("model file: 'builtin' must be a string");
        std::map<std::string, double> params;
        for (const auto& [key, val] : *sec) {
            if (key.rfind("params.", 0) == 0) {
                if (!val.is_number())
                    throw std::invalid_argument("model file: parameter '" + key + "' must be a number");
                params[key.substr(7)] = val.num();
            }
        }
        return builtin_model(b->str(), params);
    }

    const auto* ld = doc.find("model", "local_dim");
    const auto* bond = doc.find("model", "bond");
    const auto* charge = doc.find("model", "charge");
    if (!ld || !bond || !charge)
        throw std::invalid_argument("model file: raw model needs local_dim, bond and charge");
    ModelSpec m;
    m.name = "custom";
    m.local_dim = static_cast<int>(ld->num());
    m.bond = detail::matrix_from_doc(*bond, "bond");
    m.charge = detail::matrix_from_doc(*charge, "charge");
    validate_model(m);
    return m;
}

inline ModelSpec parse_model(const std::string& text) {
    return model_from_document(parse_document(text));
}

inline std::string serialize_model(const ModelSpec& m) {
    std::ostringstream os;
    os << "[model]\n";
    if (m.name == "xxz" || m.name == "fermion") {
        os << "builtin = \"" << m.name << "\"\n";
        for (const auto& [k, v] : m.params) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            os << "params." << k << " = " << buf << "\n";
        }
        return os.str();
    }
    os << "local_dim = " << m.local_dim << "\n";
    auto emit = [&os](const char* key, const Mat& mat) {
        os << key << " = [";
        for (Eigen::Index i = 0; i < mat.rows(); ++i) {
            os << (i ? ",\n    [" : "[");
            for (Eigen::Index j = 0; j < mat.cols(); ++j) {
                char re[40], im[40];
                std::snprintf(re, sizeof re, "%.17g", mat(i, j).real());
                std::snprintf(im, sizeof im, "%.17g", mat(i, j).imag());
                os << (j ? "," : "") << "[" << re << "," << im << "]";
            }
            os << "]";
        }
        os << "]\n";
    };
    emit("bond", m.bond);
    emit("charge", m.charge);
    return os.str();
}

} // namespace nesslat
