#include "propriety/io.hpp"
#include "propriety/errors.hpp"

#include <fstream>
#include <sstream>

namespace propriety {

namespace {

Rational rational_from_json(const nlohmann::json& v, const std::string& where) {
    if (v.is_string()) return rational_from_decimal(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number_unsigned()) return Rational(static_cast<long long>(v.get<unsigned long long>()));
    if (v.is_number_float()) return rational_from_shortest_decimal(v.get<double>());
    throw ParseError(where + ": expected a number or decimal string");
}

long integer_from_json(const nlohmann::json& v, const std::string& where) {
    const Rational r = rational_from_json(v, where);
    if (denominator(r) != 1)
        throw ParseError(where + ": expected an integer");
    return numerator(r).convert_to<long>();
}

RatMatrix matrix_from_json(const nlohmann::json& v, const std::string& where) {
    if (!v.is_array())
        throw ParseError(where + ": expected an array of rows");
    const std::size_t rows = v.size();
    std::size_t cols = 0;
    if (rows > 0) {
        if (!v[0].is_array())
            throw ParseError(where + ": expected rows to be arrays");
        cols = v[0].size();
    }
    RatMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!v[i].is_array() || v[i].size() != cols)
            throw ParseError(where + ": row " + std::to_string(i + 1) +
                             " has a different length");
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = rational_from_json(v[i][j], where);
    }
    return m;
}

FamilyKind family_from_string(const std::string& s) {
    if (s == "binomial") return FamilyKind::Binomial;
    if (s == "bernoulli" || s == "binary") return FamilyKind::Bernoulli;
    if (s == "poisson") return FamilyKind::Poisson;
    throw ParseError("unknown family: " + s);
}

Link link_from_json(const nlohmann::json& v) {
    Link link;
    std::string kind;
    if (v.is_string()) {
        kind = v.get<std::string>();
    } else if (v.is_object()) {
        kind = v.at("kind").get<std::string>();
        if (v.contains("moment_order"))
            link.declared_moment_order = v.at("moment_order").get<double>();
    } else {
        throw ParseError("link: expected a string or an object");
    }
    if (kind == "logit") link.kind = LinkKind::Logit;
    else if (kind == "probit") link.kind = LinkKind::Probit;
    else if (kind == "log") link.kind = LinkKind::Log;
    else if (kind == "user_cdf") link.kind = LinkKind::UserCdf;
    else throw ParseError("unknown link: " + kind);
    return link;
}

std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> out;
    std::string token;
    for (char c : line) {
        if (c == ',' || c == ' ' || c == '\t' || c == '\r') {
            if (!token.empty()) out.push_back(std::move(token));
            token.clear();
        } else {
            token.push_back(c);
        }
    }
    if (!token.empty()) out.push_back(std::move(token));
    return out;
}

RatMatrix matrix_from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound("cannot open " + path);
    std::vector<std::vector<Rational>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') continue;
        auto tokens = split_tokens(line);
        if (tokens.empty()) continue;
        std::vector<Rational> row;
        row.reserve(tokens.size());
        for (const auto& t : tokens) row.push_back(rational_from_decimal(t));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(path + ": no rows");
    RatMatrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size())
            throw ParseError(path + ": ragged rows");
        for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

std::vector<long> integers_from_csv_file(const std::string& path) {
    const RatMatrix m = matrix_from_csv_file(path);
    std::vector<long> out;
    out.reserve(m.rows() * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (denominator(m(i, j)) != 1)
                throw ParseError(path + ": expected integers");
            out.push_back(numerator(m(i, j)).convert_to<long>());
        }
    return out;
}

nlohmann::ordered_json rationals_to_json(const std::vector<Rational>& vec) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : vec) arr.push_back(rational_to_string(r));
    return arr;
}

} // namespace

GlmmModel model_from_json(const nlohmann::json& doc) {
    GlmmModel model;
    model.family = family_from_string(doc.at("family").get<std::string>());
    model.link = link_from_json(doc.at("link"));
    for (const auto& v : doc.at("y"))
        model.y.push_back(integer_from_json(v, "y"));
    if (doc.contains("m"))
        for (const auto& v : doc.at("m"))
            model.m.push_back(integer_from_json(v, "m"));
    model.X = matrix_from_json(doc.at("X"), "X");
    model.Z = matrix_from_json(doc.at("Z"), "Z");
    for (const auto& blk : doc.at("blocks")) {
        PriorBlock b;
        b.q = static_cast<int>(integer_from_json(blk.at("q"), "blocks.q"));
        b.a = rational_from_json(blk.at("a"), "blocks.a");
        b.b = rational_from_json(blk.at("b"), "blocks.b");
        model.blocks.push_back(std::move(b));
    }
    return model;
}

GlmmModel model_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound("cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    try {
        return model_from_json(doc);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

GlmmModel model_from_csv(const std::string& x_path, const std::string& z_path,
                         const std::string& y_path, const std::string& m_path,
                         FamilyKind family, const Link& link,
                         const std::vector<PriorBlock>& blocks) {
    GlmmModel model;
    model.family = family;
    model.link = link;
    model.X = matrix_from_csv_file(x_path);
    model.Z = matrix_from_csv_file(z_path);
    model.y = integers_from_csv_file(y_path);
    if (!m_path.empty()) model.m = integers_from_csv_file(m_path);
    model.blocks = blocks;
    return model;
}

nlohmann::ordered_json verdict_to_json(const Verdict& verdict) {
    nlohmann::ordered_json out;
    out["verdict"] = outcome_name(verdict.outcome);
    nlohmann::ordered_json results = nlohmann::ordered_json::array();
    for (const auto& report : verdict.basis) {
        nlohmann::ordered_json r;
        r["id"] = report.result_id;
        r["kind"] = report.necessary ? "necessary" : "sufficient";
        r["applicable"] = report.applicable;
        if (report.necessary)
            r["violated"] = report.violated();
        else
            r["satisfied"] = report.satisfied();
        if (!report.scope_note.empty()) r["scope_note"] = report.scope_note;
        nlohmann::ordered_json subs = nlohmann::ordered_json::array();
        for (const auto& sub : report.subconditions) {
            nlohmann::ordered_json s;
            s["name"] = sub.name;
            s["status"] = status_name(sub.status);
            s["detail"] = sub.detail;
            if (sub.vec) s[sub.vec_role] = rationals_to_json(*sub.vec);
            subs.push_back(std::move(s));
        }
        r["subconditions"] = std::move(subs);
        results.push_back(std::move(r));
    }
    out["results"] = std::move(results);
    return out;
}

std::string verdict_to_text(const Verdict& verdict) {
    std::ostringstream os;
    os << "verdict: " << outcome_name(verdict.outcome) << "\n";
    for (const auto& report : verdict.basis) {
        os << "  " << report.result_id << " ["
           << (report.necessary ? "necessary" : "sufficient") << "]: ";
        if (!report.applicable)
            os << "not applicable";
        else if (report.necessary)
            os << (report.violated() ? "violated" : "holds");
        else
            os << (report.satisfied() ? "satisfied" : "not satisfied");
        os << "\n";
        if (!report.scope_note.empty())
            os << "      note: " << report.scope_note << "\n";
        for (const auto& sub : report.subconditions) {
            os << "      [" << status_name(sub.status) << "] " << sub.name << ": "
               << sub.detail << "\n";
            if (sub.vec) {
                os << "        " << sub.vec_role << " = (";
                for (std::size_t i = 0; i < sub.vec->size(); ++i)
                    os << (i ? ", " : "") << rational_to_string((*sub.vec)[i]);
                os << ")\n";
            }
        }
    }
    return os.str();
}

nlohmann::ordered_json fit_to_json(const GlmFit& fit) {
    nlohmann::ordered_json out;
    nlohmann::ordered_json beta = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < fit.beta_hat.size(); ++i)
        beta.push_back(fit.beta_hat(i));
    out["beta_hat"] = std::move(beta);
    out["converged"] = fit.converged;
    out["iterations"] = fit.iterations;
    out["separation"] = fit.separation_flag;
    out["deviance"] = fit.deviance;
    return out;
}

} // namespace propriety
