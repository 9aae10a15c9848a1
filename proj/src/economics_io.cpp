#include <map>
#include <sstream>

#include "dealdesk/csv.hpp"
#include "dealdesk/economics.hpp"
#include "dealdesk/kv_config.hpp"

namespace dealdesk::economics {

namespace {

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = csv::trim(item); !t.empty()) out.push_back(csv::normalize_header(t));
    return out;
}

double number_at(const csv::Table& t, std::size_t r, std::size_t c) {
    const auto& row = t.rows[r];
    const std::string where = "line " + std::to_string(t.lines[r]) + ", column " + t.header[c];
    if (c >= row.size()) throw Error(ErrorKind::ParseError, where + ": missing cell");
    std::optional<double> v;
    try {
        v = csv::parse_optional_number(row[c]);
    } catch (const Error& e) {
        throw Error(ErrorKind::ParseError, where + ": " + e.detail());
    }
    if (!v) throw Error(ErrorKind::ParseError, where + ": blank cell");
    return *v;
}

}  // namespace

ReturnSeries load_returns(std::istream& in) {
    const csv::Table t = csv::read_table(in);
    const auto cd = t.column("date"), cf = t.column("firm_return"), cm = t.column("market_return");
    if (!cf || !cm) throw Error(ErrorKind::HeaderMismatch, "returns need columns firm_return and market_return");
    const auto n = static_cast<Eigen::Index>(t.rows.size());
    ReturnSeries s;
    s.firm_returns.resize(n);
    s.market_returns.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto r = static_cast<std::size_t>(i);
        if (cd) {
            const auto& row = t.rows[r];
            auto d = *cd < row.size() ? parse_iso_date(csv::trim(row[*cd])) : std::nullopt;
            if (!d) throw Error(ErrorKind::ParseError, "line " + std::to_string(t.lines[r]) + ": bad date");
            s.dates.push_back(*d);
        }
        s.firm_returns(i) = number_at(t, r, *cf);
        s.market_returns(i) = number_at(t, r, *cm);
    }
    validate(s);
    return s;
}

TakeoverRegressionSpec load_takeover_spec(std::istream& in) {
    std::string header_block, body, line;
    bool in_header = true;
    while (std::getline(in, line)) {
        const std::string t = csv::trim(line);
        if (in_header && (t.empty() || t.front() == '#')) {
            if (!t.empty()) header_block += t.substr(1) + "\n";
            continue;
        }
        in_header = false;
        body += line + "\n";
    }
    std::istringstream hin(header_block);
    const KeyValueConfig roles = KeyValueConfig::parse(hin);
    std::istringstream bin(body);
    const csv::Table t = csv::read_table(bin);
    const auto n = static_cast<Eigen::Index>(t.rows.size());

    auto column_of = [&](const std::string& name) {
        auto c = t.column(name);
        if (!c) throw Error(ErrorKind::HeaderMismatch, "declared column '" + name + "' not found in data");
        return *c;
    };
    auto block = [&](const char* role, std::vector<std::string>& names) {
        names = split_list(roles.get(role).value_or(""));
        Eigen::MatrixXd m(n, static_cast<Eigen::Index>(names.size()));
        for (std::size_t j = 0; j < names.size(); ++j) {
            const auto c = column_of(names[j]);
            for (Eigen::Index i = 0; i < n; ++i) m(i, static_cast<Eigen::Index>(j)) = number_at(t, static_cast<std::size_t>(i), c);
        }
        return m;
    };

    TakeoverRegressionSpec spec;
    const auto response = roles.get("response");
    if (!response) throw Error(ErrorKind::ConfigInvalid, "regression header must declare '# response = <column>'");
    const auto rc = column_of(csv::normalize_header(*response));
    spec.response.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) spec.response(i) = number_at(t, static_cast<std::size_t>(i), rc);
    spec.institutional = block("institutional", spec.institutional_names);
    spec.sectoral = block("sectoral", spec.sectoral_names);
    spec.technological = block("technological", spec.technological_names);
    spec.regime_dummies = block("regime", spec.regime_names);
    if (auto ic = roles.get("intercept")) spec.include_intercept = !(*ic == "false" || *ic == "0" || *ic == "no");
    validate(spec);
    return spec;
}

}  // namespace dealdesk::economics
