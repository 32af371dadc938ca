#pragma once

// JSON and CSV forms of the library's results. Big integers are decimal
// strings, rationals are "p/q" strings, reals go through the fixed-point
// renderers in numeric.hpp; outputs are byte-reproducible for equal inputs.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sqfree/analysis.hpp"
#include "sqfree/common.hpp"
#include "sqfree/enumerate.hpp"
#include "sqfree/genfun.hpp"
#include "sqfree/morphism.hpp"
#include "sqfree/numeric.hpp"
#include "sqfree/roots.hpp"
#include "sqfree/thermo.hpp"

namespace sqfree {

using Json = nlohmann::ordered_json;

inline Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in.good())
        throw UsageError("serialize", "load_json", "cannot open file", path);
    Json doc = Json::parse(in, nullptr, false);
    if (doc.is_discarded())
        throw UsageError("serialize", "load_json", "malformed JSON", path);
    return doc;
}

inline void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out.good())
        throw UsageError("serialize", "write_text", "cannot open file", path);
    out << content;
    if (!out.good())
        throw UsageError("serialize", "write_text", "write failed", path);
}

inline void write_json(const std::string& path, const Json& doc) {
    write_text(path, doc.dump(2) + "\n");
}

namespace detail {

inline Json poly_strings(const IntPolynomial& p) {
    Json arr = Json::array();
    for (const BigInt& c : p.c) arr.push_back(c.str());
    return arr;
}

inline std::string fraction(const Rational& v) { return v.str(); }

}  // namespace detail

/// {"ell": L|null, "series": ["1","3","6","12",...]}
inline Json series_to_json(std::optional<int> ell, const CountSeries& series) {
    Json doc;
    if (ell)
        doc["ell"] = *ell;
    else
        doc["ell"] = nullptr;
    Json arr = Json::array();
    for (const BigInt& v : series.values) arr.push_back(v.str());
    doc["series"] = std::move(arr);
    return doc;
}

inline std::string series_to_csv(std::optional<int> ell,
                                 const CountSeries& series) {
    std::ostringstream out;
    out << "n,count\n";
    (void)ell;
    for (std::size_t n = 0; n < series.values.size(); ++n)
        out << n << "," << series.values[n].str() << "\n";
    return out.str();
}

/// {"triangle": [["1"],["0","..."],...]}; row n lists k = 0..n.
inline Json triangle_to_json(const CountTable& table) {
    Json doc;
    doc["n_max"] = table.n_max();
    Json rows = Json::array();
    for (const auto& row : table.rows) {
        Json r = Json::array();
        for (const BigInt& v : row) r.push_back(v.str());
        rows.push_back(std::move(r));
    }
    doc["triangle"] = std::move(rows);
    return doc;
}

inline std::string triangle_to_csv(const CountTable& table) {
    std::ostringstream out;
    out << "n,k,count\n";
    for (int n = 0; n <= table.n_max(); ++n)
        for (int k = 0; k <= n; ++k)
            out << n << "," << k << "," << table.at(n, k).str() << "\n";
    return out.str();
}

/// {"ell", "num", "den", "d_num", "d_den"}; coefficients low order first.
inline Json gf_to_json(int ell, const RationalGF& gf) {
    Json doc;
    doc["ell"] = ell;
    doc["num"] = detail::poly_strings(gf.num);
    doc["den"] = detail::poly_strings(gf.den);
    doc["d_num"] = gf.d_num;
    doc["d_den"] = gf.d_den;
    return doc;
}

/// Plain-text polynomial rendering, low order first: "1 + 2*x + 3*x^2".
inline std::string poly_to_text(const IntPolynomial& p) {
    if (p.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (int i = 0; i <= p.degree(); ++i) {
        BigInt c = p.coeff(i);
        if (c == 0) continue;
        if (first) {
            if (c < 0) out << "-";
            first = false;
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        BigInt a = abs(c);
        if (i == 0) {
            out << a.str();
        } else {
            if (a != 1) out << a.str() << "*";
            out << "x";
            if (i > 1) out << "^" << i;
        }
    }
    return out.str();
}

inline std::string gf_to_text(int ell, const RationalGF& gf) {
    std::ostringstream out;
    out << "ell = " << ell << "\n"
        << "numerator   = " << poly_to_text(gf.num) << "\n"
        << "denominator = " << poly_to_text(gf.den) << "\n"
        << "degrees     = (" << gf.d_num << ", " << gf.d_den << ")\n";
    return out.str();
}

/// Poles and zeros with the certified dominant pole; complex parts as
/// 20-digit decimal strings, the dominant location at 30.
inline Json poles_to_json(const PoleSet& set, const RootResult& dominant) {
    Json doc;
    doc["ell"] = set.ell;
    doc["x_c"] = fmt_bigfloat(dominant.x_c, 30);
    doc["x_c_isolation"] = {detail::fraction(dominant.lo),
                            detail::fraction(dominant.hi)};
    auto points = [](const std::vector<RootPoint>& pts) {
        Json arr = Json::array();
        for (const RootPoint& p : pts) {
            Json q;
            q["re"] = fmt_bigfloat(p.z.real(), 20);
            q["im"] = fmt_bigfloat(p.z.imag(), 20);
            q["multiplicity"] = p.multiplicity;
            arr.push_back(std::move(q));
        }
        return arr;
    };
    doc["poles"] = points(set.poles);
    doc["zeros"] = points(set.zeros);
    doc["near_unit_fraction"] = detail::fraction(set.near_unit_fraction);
    return doc;
}

/// Substitution check outcome plus the growth bound it certifies.
inline Json certificate_to_json(const std::string& name,
                                const SubstitutionTriple& triple,
                                const TripleCertificate& cert) {
    Json doc;
    doc["name"] = name;
    doc["m"] = triple.m;
    doc["k"] = triple.k;
    doc["check_length"] = cert.check_length;
    doc["valid"] = cert.valid;
    if (cert.witness) {
        Json w;
        w["input"] = cert.witness->input.str();
        w["choices"] = cert.witness->choices;
        w["substituted"] = cert.witness->substituted.str();
        w["square_start"] = cert.witness->square_start;
        w["square_period"] = cert.witness->square_period;
        doc["witness"] = std::move(w);
    } else {
        doc["witness"] = nullptr;
    }
    Json g;
    g["k"] = cert.growth.k;
    g["m"] = cert.growth.m;
    g["existence_only"] = cert.growth.existence_only;
    if (!cert.growth.existence_only) g["value"] = cert.growth.decimal;
    doc["growth_bound"] = std::move(g);
    return doc;
}

/// Letter-count matrix with its exact stationary frequencies.
inline Json frequencies_to_json(const std::string& name,
                                const SubstitutionMatrix& mat,
                                const std::array<Rational, 3>& freq) {
    Json doc;
    doc["name"] = name;
    doc["m"] = mat.m;
    Json rows = Json::array();
    for (int y = 0; y < 3; ++y) {
        Json r = Json::array();
        for (int x = 0; x < 3; ++x)
            r.push_back(mat.entry[static_cast<std::size_t>(y)]
                                 [static_cast<std::size_t>(x)]);
        rows.push_back(std::move(r));
    }
    doc["matrix"] = std::move(rows);
    doc["frequencies"] = {detail::fraction(freq[0]), detail::fraction(freq[1]),
                          detail::fraction(freq[2])};
    return doc;
}

inline Json extent_to_json(const FrequencyExtent& ext) {
    Json doc;
    doc["k"] = ext.k;
    doc["n_min"] = ext.n_min;
    if (ext.n_max)
        doc["n_max"] = *ext.n_max;
    else
        doc["n_max"] = nullptr;
    doc["witness_min"] = ext.witness_min.str();
    doc["witness_max"] = ext.witness_max.str();
    if (ext.freq_lower)
        doc["freq_lower"] = detail::fraction(*ext.freq_lower);
    else
        doc["freq_lower"] = nullptr;
    if (ext.freq_upper)
        doc["freq_upper"] = detail::fraction(*ext.freq_upper);
    else
        doc["freq_upper"] = nullptr;
    return doc;
}

/// Pooled singularity estimate with its full approximant family.
inline Json estimate_to_json(const ApproximantEstimate& est) {
    Json doc;
    doc["x_c"] = fmt_fixed(est.x_c_est, 7);
    doc["gamma"] = fmt_fixed(est.gamma_est, 4);
    doc["amplitude"] = fmt_fixed(est.A_est, 4);
    doc["x_c_spread"] = fmt_fixed(est.x_c_spread, 7);
    doc["gamma_spread"] = fmt_fixed(est.gamma_spread, 4);
    doc["amplitude_spread"] = fmt_fixed(est.A_spread, 4);
    doc["survivors"] = est.survivors;
    doc["amplitude_monotone"] = est.amplitude_monotone;
    Json fam = Json::array();
    for (const DlogPadeResult& member : est.family) {
        Json m;
        m["L"] = member.L;
        m["M"] = member.M;
        m["defect"] = member.defect;
        if (member.defect) {
            m["defect_reason"] = member.defect_reason;
        } else {
            m["x_c"] = fmt_fixed(member.x_c, 7);
            m["gamma"] = fmt_fixed(member.gamma, 4);
        }
        fam.push_back(std::move(m));
    }
    doc["family"] = std::move(fam);
    return doc;
}

/// Structured error wrapper written to standard error by the CLI.
inline Json error_to_json(const Error& e) {
    Json doc;
    Json body;
    body["module"] = e.module();
    body["operation"] = e.operation();
    body["reason"] = e.reason();
    if (!e.detail().empty()) body["detail"] = e.detail();
    doc["error"] = std::move(body);
    return doc;
}

/// q, F_n(q), the rigorous envelope, and the maximising letter count.
inline std::string free_energy_csv(const ThermoTable& table) {
    std::ostringstream out;
    out << "q,F,lower,upper,argmax_k\n";
    const auto& values = table.values[static_cast<std::size_t>(table.n_used)];
    const auto& argmax = table.argmax[static_cast<std::size_t>(table.n_used)];
    for (std::size_t j = 0; j < table.q_grid.size(); ++j) {
        auto bounds = free_energy_bounds(table.q_grid[j]);
        out << fmt_fixed(table.q_grid[j], 6) << "," << fmt_fixed(values[j], 12)
            << "," << fmt_fixed(bounds.lower, 12) << ","
            << fmt_fixed(bounds.upper, 12) << "," << argmax[j] << "\n";
    }
    return out.str();
}

inline std::string entropy_csv(const EntropyCurve& curve) {
    std::ostringstream out;
    out << "eps,P,q\n";
    for (const EntropyPoint& pt : curve.points)
        out << fmt_fixed(pt.eps, 9) << "," << fmt_fixed(pt.value, 12) << ","
            << fmt_fixed(pt.q, 9) << "\n";
    return out.str();
}

inline std::string critical_csv(const CriticalCurve& curve) {
    std::ostringstream out;
    out << "q,x_c,uncertainty,defective,within_bounds\n";
    for (const CriticalPoint& pt : curve.points) {
        out << detail::fraction(pt.q) << ",";
        if (pt.defective)
            out << ",,1,\n";
        else
            out << fmt_fixed(pt.x_c, 7) << "," << fmt_fixed(pt.uncertainty, 7)
                << ",0," << (pt.within_bounds ? 1 : 0) << "\n";
    }
    return out.str();
}

/// Reads {"series": ["1","3",...]} back into exact integers. Digits only;
/// leading zeros are stripped so no base-detecting parser is involved.
inline CountSeries series_from_json(const Json& doc) {
    if (!doc.contains("series") || !doc["series"].is_array())
        throw UsageError("serialize", "series_from_json", "missing series array");
    CountSeries out;
    for (const auto& item : doc["series"]) {
        if (!item.is_string())
            throw UsageError("serialize", "series_from_json",
                             "series entries must be decimal strings");
        std::string s = item.get<std::string>();
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
            throw UsageError("serialize", "series_from_json",
                             "not a nonnegative decimal", s);
        std::size_t nz = s.find_first_not_of('0');
        out.values.emplace_back(nz == std::string::npos ? "0" : s.substr(nz));
    }
    return out;
}

/// Reads the substitution images of a fixture document; "m"/"k" fields,
/// when present, must agree with the parsed images.
inline SubstitutionTriple triple_from_json(const Json& doc) {
    if (!doc.contains("images"))
        throw UsageError("serialize", "triple_from_json", "missing images");
    auto list = [&](const char* letter) {
        std::vector<Word> out;
        const auto& images = doc["images"];
        if (!images.contains(letter))
            throw UsageError("serialize", "triple_from_json",
                             "missing image list", letter);
        for (const auto& s : images[letter]) {
            if (!s.is_string())
                throw UsageError("serialize", "triple_from_json",
                                 "image is not a string", letter);
            out.push_back(Word::from_string(s.get<std::string>()));
        }
        return out;
    };
    SubstitutionTriple t = make_triple(list("a"), list("b"), list("c"));
    if (doc.contains("m") && doc["m"].get<int>() != t.m)
        throw UsageError("serialize", "triple_from_json",
                         "declared m disagrees with images");
    if (doc.contains("k") && doc["k"].get<int>() != t.k)
        throw UsageError("serialize", "triple_from_json",
                         "declared k disagrees with images");
    return t;
}

}  // namespace sqfree
