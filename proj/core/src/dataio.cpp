#include "qccp/dataio.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "json.hpp"

#include "embedded_data.hpp"
#include "qccp/errors.hpp"
#include "qccp/linalg.hpp"
#include "qccp/tolerances.hpp"

namespace qccp {

namespace {

using ojson = nlohmann::ordered_json;
using njson = nlohmann::json;

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
    throw ParseError(where + ": " + what);
}

const njson& field(const njson& j, const char* key, const std::string& where) {
    if (!j.is_object()) parse_fail(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end())
        parse_fail(where, std::string("missing required key \"") + key + "\"");
    return *it;
}

int int_field(const njson& j, const char* key, const std::string& where) {
    const njson& v = field(j, key, where);
    if (!v.is_number_integer())
        parse_fail(where + "." + key, "expected an integer");
    return v.get<int>();
}

cx complex_at(const njson& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        parse_fail(where, "complex numbers are two-element arrays [re, im]");
    return cx(j[0].get<double>(), j[1].get<double>());
}

Ket ket_at(const njson& j, int d, const std::string& where) {
    if (!j.is_array() || static_cast<int>(j.size()) != d)
        parse_fail(where, "expected a vector of " + std::to_string(d) +
                              " complex amplitudes");
    Ket v(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        v[static_cast<std::size_t>(i)] =
            complex_at(j[static_cast<std::size_t>(i)],
                       where + "[" + std::to_string(i) + "]");
    return v;
}

Matrix matrix_at(const njson& j, int d, const std::string& where) {
    if (!j.is_array() || static_cast<int>(j.size()) != d)
        parse_fail(where, "expected " + std::to_string(d) + " matrix rows");
    Matrix m(d, d);
    for (int i = 0; i < d; ++i) {
        const njson& row = j[static_cast<std::size_t>(i)];
        const std::string rw = where + "[" + std::to_string(i) + "]";
        if (!row.is_array() || static_cast<int>(row.size()) != d)
            parse_fail(rw, "expected " + std::to_string(d) + " entries");
        for (int k = 0; k < d; ++k)
            m(i, k) = complex_at(row[static_cast<std::size_t>(k)],
                                 rw + "[" + std::to_string(k) + "]");
    }
    return m;
}

// Normalization that is the identity on already-unit vectors, so canonical
// documents re-parse to bit-identical strategies.
Ket canonical_normalize(Ket v, const std::string& where) {
    double n2 = 0.0;
    for (const cx& z : v) n2 += std::norm(z);
    const double n = std::sqrt(n2);
    if (n < 1e-12) parse_fail(where, "zero vector cannot be normalized");
    if (std::abs(n - 1.0) <= 1e-12) return v;
    for (cx& z : v) z /= n;
    return v;
}

Matrix operator_at(const njson& j, int d, const std::string& where,
                   std::vector<std::string>* notes) {
    const njson& kind = field(j, "kind", where);
    if (!kind.is_string()) parse_fail(where + ".kind", "expected a string");
    const std::string k = kind.get<std::string>();
    if (k == "zero") return Matrix::zeros(d, d);
    if (k == "kets") {
        const njson& kets = field(j, "kets", where);
        if (!kets.is_array() || kets.empty() ||
            static_cast<int>(kets.size()) > d)
            parse_fail(where + ".kets", "expected 1.." + std::to_string(d) +
                                            " spanning vectors");
        std::vector<Ket> vs;
        vs.reserve(kets.size());
        for (std::size_t i = 0; i < kets.size(); ++i)
            vs.push_back(ket_at(kets[i], d,
                                where + ".kets[" + std::to_string(i) + "]"));
        try {
            vs = gram_schmidt(vs);
        } catch (const DegeneracyError& e) {
            throw ValidationError(where + ".kets: " + e.what());
        }
        if (vs.size() > 1 && notes != nullptr)
            notes->push_back(where + ": " + std::to_string(vs.size()) +
                             " spanning vectors orthonormalized");
        Matrix m = Matrix::zeros(d, d);
        for (const Ket& v : vs) m += projector(v);
        return m;
    }
    if (k == "matrix")
        return hermitize(matrix_at(field(j, "matrix", where), d, where + ".matrix"));
    parse_fail(where + ".kind", "expected \"zero\", \"kets\" or \"matrix\"");
}

std::vector<Matrix> povm_at(const njson& j, int d, const std::string& where,
                            std::vector<std::string>* notes) {
    const njson& ops = field(j, "operators", where);
    if (!ops.is_array() || static_cast<int>(ops.size()) != d)
        parse_fail(where + ".operators",
                   "expected " + std::to_string(d) + " outcome operators");
    std::vector<Matrix> povm;
    povm.reserve(static_cast<std::size_t>(d));
    for (int g = 0; g < d; ++g)
        povm.push_back(operator_at(ops[static_cast<std::size_t>(g)], d,
                                   where + ".operators[" + std::to_string(g) + "]",
                                   notes));
    return povm;
}

double completeness_defect(const std::vector<Matrix>& povm, int d) {
    Matrix s = Matrix::zeros(d, d);
    for (const Matrix& m : povm) s += m;
    s -= Matrix::identity(d);
    return max_abs(s);
}

void repair_povm(std::vector<Matrix>& povm, int d) {
    Matrix t = Matrix::zeros(d, d);
    for (const Matrix& m : povm) t += m;
    const Matrix tm = invsqrt_psd(hermitize(t), 1e-12);
    for (Matrix& m : povm) m = hermitize(tm * m * tm);
}

ParsedStrategy parse_pm(const njson& j, int d, bool repair) {
    ParsedStrategy out;
    PmStrategy s;
    s.d = d;
    s.states.assign(static_cast<std::size_t>(2 * d), Matrix());

    const njson& states = field(j, "states", "document");
    if (!states.is_array() || static_cast<int>(states.size()) != 2 * d)
        parse_fail("states", "expected exactly 2d = " + std::to_string(2 * d) +
                                 " state entries");
    std::vector<bool> seen(static_cast<std::size_t>(2 * d), false);
    for (std::size_t i = 0; i < states.size(); ++i) {
        const std::string where = "states[" + std::to_string(i) + "]";
        const njson& e = states[i];
        const int x0 = int_field(e, "x0", where);
        const int x = int_field(e, "x", where);
        if (x0 < 0 || x0 >= d) parse_fail(where + ".x0", "out of range");
        if (x < 0 || x > 1) parse_fail(where + ".x", "must be 0 or 1");
        const std::size_t idx = static_cast<std::size_t>(x0) * 2 + x;
        if (seen[idx]) parse_fail(where, "duplicate (x0, x) pair");
        seen[idx] = true;
        if (e.contains("ket")) {
            s.states[idx] = projector(
                canonical_normalize(ket_at(e["ket"], d, where + ".ket"),
                                    where + ".ket"));
        } else if (e.contains("density")) {
            s.states[idx] = hermitize(matrix_at(e["density"], d, where + ".density"));
        } else {
            parse_fail(where, "state needs a \"ket\" or a \"density\"");
        }
    }

    const njson& meas = field(j, "measurements", "document");
    if (!meas.is_array() || meas.size() != 2)
        parse_fail("measurements", "expected exactly 2 measurement settings");
    std::array<bool, 2> have{false, false};
    for (std::size_t i = 0; i < 2; ++i) {
        const std::string where = "measurements[" + std::to_string(i) + "]";
        const int y = int_field(meas[i], "y", where);
        if (y < 0 || y > 1) parse_fail(where + ".y", "must be 0 or 1");
        if (have[static_cast<std::size_t>(y)])
            parse_fail(where, "duplicate measurement setting");
        have[static_cast<std::size_t>(y)] = true;
        s.povms[y] = povm_at(meas[i], d, where, &out.canon.notes);
    }

    for (int y = 0; y < 2; ++y)
        out.canon.completeness_defect_before[static_cast<std::size_t>(y)] =
            completeness_defect(s.povms[y], d);
    if (repair) {
        for (int y = 0; y < 2; ++y) repair_povm(s.povms[y], d);
        out.canon.repaired = true;
        std::ostringstream note;
        note << "POVMs renormalized by T^(-1/2); completeness defects before "
                "repair: "
             << out.canon.completeness_defect_before[0] << ", "
             << out.canon.completeness_defect_before[1];
        out.canon.notes.push_back(note.str());
    }
    validate_pm(s, lenient_profile());
    out.strategy = std::move(s);
    return out;
}

ParsedStrategy parse_bell(const njson& j, int d, bool repair) {
    ParsedStrategy out;
    BellStrategy s;
    s.d = d;

    const njson& states = field(j, "states", "document");
    if (!states.is_array() || states.size() != 1)
        parse_fail("states", "the bell model has exactly one shared state");
    {
        const njson& e = states[0];
        const std::string where = "states[0]";
        if (int_field(e, "x0", where) != 0 || int_field(e, "x", where) != 0)
            parse_fail(where, "the shared state entry must carry x0=0, x=0");
        if (!e.contains("ket"))
            parse_fail(where, "the shared state must be a \"ket\" of d^2 amplitudes");
        s.psi = canonical_normalize(ket_at(e["ket"], d * d, where + ".ket"),
                                    where + ".ket");
    }

    const njson& meas = field(j, "measurements", "document");
    if (!meas.is_array() || meas.size() != 4)
        parse_fail("measurements",
                   "the bell model lists 4 measurements: Alice y=0, Alice y=1, "
                   "Bob y=0, Bob y=1");
    for (std::size_t i = 0; i < 4; ++i) {
        const std::string where = "measurements[" + std::to_string(i) + "]";
        const int y = int_field(meas[i], "y", where);
        if (y != static_cast<int>(i % 2))
            parse_fail(where + ".y",
                       "expected setting " + std::to_string(i % 2) +
                           " at this position");
        auto povm = povm_at(meas[i], d, where, &out.canon.notes);
        if (i < 2)
            s.alice[i] = std::move(povm);
        else
            s.bob[i - 2] = std::move(povm);
    }

    double alice_defect = 0.0;
    double bob_defect = 0.0;
    for (int x = 0; x < 2; ++x)
        alice_defect = std::max(alice_defect, completeness_defect(s.alice[x], d));
    for (int y = 0; y < 2; ++y)
        bob_defect = std::max(bob_defect, completeness_defect(s.bob[y], d));
    out.canon.completeness_defect_before = {alice_defect, bob_defect};
    if (repair) {
        for (int x = 0; x < 2; ++x) repair_povm(s.alice[x], d);
        for (int y = 0; y < 2; ++y) repair_povm(s.bob[y], d);
        out.canon.repaired = true;
        out.canon.notes.push_back(
            "all four POVMs renormalized by T^(-1/2)");
    }
    validate_bell(s, lenient_profile());
    out.strategy = std::move(s);
    return out;
}

ojson complex_json(const cx& z) { return ojson::array({z.real(), z.imag()}); }

ojson ket_json(const Ket& v) {
    ojson a = ojson::array();
    for (const cx& z : v) a.push_back(complex_json(z));
    return a;
}

ojson matrix_json(const Matrix& m) {
    ojson rows = ojson::array();
    for (int i = 0; i < m.rows; ++i) {
        ojson row = ojson::array();
        for (int k = 0; k < m.cols; ++k) row.push_back(complex_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

ojson operator_json(const Matrix& m) {
    ojson o;
    if (max_abs(m) == 0.0) {
        o["kind"] = "zero";
    } else {
        o["kind"] = "matrix";
        o["matrix"] = matrix_json(m);
    }
    return o;
}

ojson pm_json(const PmStrategy& s) {
    ojson j;
    j["dimension"] = s.d;
    j["model"] = "prepare-measure";
    ojson states = ojson::array();
    for (int x0 = 0; x0 < s.d; ++x0)
        for (int x = 0; x < 2; ++x) {
            ojson e;
            e["x0"] = x0;
            e["x"] = x;
            e["density"] = matrix_json(s.state(x0, x));
            states.push_back(std::move(e));
        }
    j["states"] = std::move(states);
    ojson meas = ojson::array();
    for (int y = 0; y < 2; ++y) {
        ojson e;
        e["y"] = y;
        ojson ops = ojson::array();
        for (const Matrix& m : s.povms[y]) ops.push_back(operator_json(m));
        e["operators"] = std::move(ops);
        meas.push_back(std::move(e));
    }
    j["measurements"] = std::move(meas);
    return j;
}

ojson bell_json(const BellStrategy& s) {
    ojson j;
    j["dimension"] = s.d;
    j["model"] = "bell";
    ojson states = ojson::array();
    {
        ojson e;
        e["x0"] = 0;
        e["x"] = 0;
        e["ket"] = ket_json(s.psi);
        states.push_back(std::move(e));
    }
    j["states"] = std::move(states);
    ojson meas = ojson::array();
    for (int i = 0; i < 4; ++i) {
        const auto& povm = i < 2 ? s.alice[i] : s.bob[i - 2];
        ojson e;
        e["y"] = i % 2;
        ojson ops = ojson::array();
        for (const Matrix& m : povm) ops.push_back(operator_json(m));
        e["operators"] = std::move(ops);
        meas.push_back(std::move(e));
    }
    j["measurements"] = std::move(meas);
    return j;
}

std::string_view embedded_appendix(int d) {
    using namespace embedded;
    switch (d) {
        case 6:
            return {reinterpret_cast<const char*>(appendix_d6), appendix_d6_len};
        case 7:
            return {reinterpret_cast<const char*>(appendix_d7), appendix_d7_len};
        case 8:
            return {reinterpret_cast<const char*>(appendix_d8), appendix_d8_len};
        case 9:
            return {reinterpret_cast<const char*>(appendix_d9), appendix_d9_len};
        case 10:
            return {reinterpret_cast<const char*>(appendix_d10),
                    appendix_d10_len};
        default:
            throw DomainError(
                "bundled reference strategies cover d in 6..10 only");
    }
}

std::string num_str(double v) { return njson(v).dump(); }

const char* constraint_name(Constraint c) {
    switch (c) {
        case Constraint::UNCONSTRAINED:
            return "none";
        case Constraint::TRACE_ONE:
            return "trace-one";
        case Constraint::RANK_ONE_PROJECTIVE:
            return "projective";
    }
    return "none";
}

}  // namespace

ParsedStrategy parse_strategy(std::string_view text, bool repair) {
    njson j;
    try {
        j = njson::parse(text);
    } catch (const njson::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) parse_fail("document", "expected a JSON object");
    const int d = int_field(j, "dimension", "document");
    if (d < 2 || d > tol::kDimCap)
        parse_fail("document.dimension", "must be between 2 and 100");
    const njson& model = field(j, "model", "document");
    if (!model.is_string()) parse_fail("document.model", "expected a string");
    const std::string tag = model.get<std::string>();
    if (tag == "prepare-measure") return parse_pm(j, d, repair);
    if (tag == "bell") return parse_bell(j, d, repair);
    parse_fail("document.model",
               "expected \"prepare-measure\" or \"bell\", got \"" + tag + "\"");
}

std::string serialize_strategy(const PmStrategy& s) {
    return pm_json(s).dump(2) + "\n";
}

std::string serialize_strategy(const BellStrategy& s) {
    return bell_json(s).dump(2) + "\n";
}

ParsedStrategy load_appendix_verbose(int d) {
    return parse_strategy(embedded_appendix(d), /*repair=*/true);
}

PmStrategy load_appendix(int d) {
    return std::get<PmStrategy>(load_appendix_verbose(d).strategy);
}

const ReferenceRow& ReferenceTable::row(int d) const {
    for (const ReferenceRow& r : rows)
        if (r.d == d) return r;
    throw DomainError("no reference row for d = " + std::to_string(d));
}

const ReferenceTable& reference_table() {
    static const ReferenceTable table = [] {
        ReferenceTable t;
        auto add = [&](int d, double qs, double prior, double bell, double ml,
                       double tr1) {
            ReferenceRow r;
            r.d = d;
            r.qs_lower = qs;
            r.qs_lower_prior = prior;
            r.bell_max = bell;
            r.ml_max = ml;
            r.qs_trace_one = tr1;
            t.rows.push_back(r);
        };
        add(2, 0.7071, 0.7071, 0.7071, 0.7071, 0.7071);
        add(3, 0.7287, 0.7287, 0.7287, 0.7887, 0.7287);
        add(4, 0.7432, 0.7432, 0.7432, 0.8032, 0.7432);
        add(5, 0.7539, 0.7539, 0.7539, 0.8249, 0.7539);
        add(6, 0.8000, 0.7624, 0.7624, 0.8345, 0.7624);
        add(7, 0.8175, 0.7815, 0.7694, 0.8461, 0.7814);
        add(8, 0.8571, 0.8006, 0.7753, 0.8529, 0.8006);
        add(9, 0.8622, 0.8622, 0.7804, 0.8605, 0.8188);
        add(10, 0.8889, 0.8778, 0.7849, 0.8657, 0.8396);
        return t;
    }();
    return table;
}

std::string rows_to_csv(const std::vector<ReportRow>& rows) {
    std::ostringstream out;
    out << "d,method,value,reference,delta,restarts,seed,wall_ms\n";
    for (const ReportRow& r : rows) {
        out << r.d << ',' << r.method << ',' << num_str(r.value) << ',';
        if (r.reference) out << num_str(*r.reference);
        out << ',';
        if (r.delta) out << num_str(*r.delta);
        out << ',' << r.restarts << ',' << r.seed << ',' << num_str(r.wall_ms)
            << '\n';
    }
    return out.str();
}

std::string rows_to_json(const std::vector<ReportRow>& rows) {
    ojson arr = ojson::array();
    for (const ReportRow& r : rows) {
        ojson e;
        e["d"] = r.d;
        e["method"] = r.method;
        e["value"] = r.value;
        e["reference"] = r.reference ? ojson(*r.reference) : ojson(nullptr);
        e["delta"] = r.delta ? ojson(*r.delta) : ojson(nullptr);
        e["restarts"] = r.restarts;
        e["seed"] = r.seed;
        e["wall_ms"] = r.wall_ms;
        arr.push_back(std::move(e));
    }
    return arr.dump(2) + "\n";
}

std::string report_to_json(const OptimizationReport& report,
                           bool include_traces) {
    ojson j;
    j["best_value"] = report.best_value;
    j["best_restart"] = report.best_restart;
    j["seed"] = report.seed;
    j["constraint"] = constraint_name(report.constraint);
    j["restarts"] = report.restarts;
    j["wall_ms"] = report.wall_ms;
    if (std::holds_alternative<PmStrategy>(report.best_strategy)) {
        j["model"] = "prepare-measure";
        j["best_strategy"] = pm_json(std::get<PmStrategy>(report.best_strategy));
    } else {
        j["model"] = "bell";
        j["best_strategy"] =
            bell_json(std::get<BellStrategy>(report.best_strategy));
    }
    if (include_traces) {
        ojson traces = ojson::array();
        for (const RestartTrace& t : report.traces) {
            ojson e;
            e["index"] = t.index;
            e["init_kind"] = t.init_kind;
            e["iterations"] = t.iterations;
            e["final_value"] = t.final_value;
            e["max_certificate_gap"] = t.max_certificate_gap;
            e["failed"] = t.failed;
            e["message"] = t.message;
            e["payoffs"] = t.payoffs;
            traces.push_back(std::move(e));
        }
        j["traces"] = std::move(traces);
    }
    return j.dump(2) + "\n";
}

}  // namespace qccp
