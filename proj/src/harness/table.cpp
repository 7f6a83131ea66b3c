#include "lgt/harness/table.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lgt {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

Table::RowBuilder& Table::RowBuilder::add(const std::string& v) {
    cells_.push_back(v);
    return *this;
}

Table::RowBuilder& Table::RowBuilder::add(double v) {
    cells_.push_back(format_double(v));
    return *this;
}

Table::RowBuilder& Table::RowBuilder::add(long long v) {
    cells_.push_back(std::to_string(v));
    return *this;
}

Table::RowBuilder::~RowBuilder() { table_.append_row(std::move(cells_)); }

void Table::append_row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size())
        throw std::invalid_argument("row width does not match table columns");
    rows_.push_back(std::move(cells));
}

std::string Table::to_csv() const {
    std::ostringstream out;
    for (size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
    out << '\n';
    for (const auto& row : rows_) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
    return out.str();
}

Table Table::from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::string cur;
        for (char c : s) {
            if (c == ',') {
                cells.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        cells.push_back(cur);
        return cells;
    };
    if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
    Table t(split(line));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        t.append_row(split(line));
    }
    return t;
}

size_t Table::column_index(const std::string& name) const {
    for (size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i] == name) return i;
    throw std::invalid_argument("no column named '" + name + "'");
}

std::string content_hash(const std::string& data) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void ResultBundle::write(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    nlohmann::json manifest_out = manifest;
    manifest_out["scenario"] = scenario;
    auto table_meta = nlohmann::json::object();
    for (const auto& [name, table] : tables) {
        std::string csv = table.to_csv();
        std::ofstream f(dir / (name + ".csv"), std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + (dir / (name + ".csv")).string());
        f << csv;
        table_meta[name] = {{"rows", table.n_rows()}, {"hash", content_hash(csv)}};
    }
    manifest_out["tables"] = std::move(table_meta);
    std::ofstream mf(dir / "manifest.json", std::ios::binary);
    mf << manifest_out.dump(2) << '\n';
}

ResultBundle ResultBundle::load(const std::filesystem::path& dir) {
    ResultBundle bundle;
    std::ifstream mf(dir / "manifest.json");
    if (!mf) throw std::runtime_error("no manifest.json in " + dir.string());
    mf >> bundle.manifest;
    bundle.scenario = bundle.manifest.value("scenario", "");
    for (const auto& [name, meta] : bundle.manifest.at("tables").items()) {
        std::ifstream tf(dir / (name + ".csv"), std::ios::binary);
        if (!tf) throw std::runtime_error("missing table " + name);
        std::stringstream buf;
        buf << tf.rdbuf();
        bundle.tables[name] = Table::from_csv(buf.str());
        (void)meta;
    }
    return bundle;
}

} // namespace lgt
