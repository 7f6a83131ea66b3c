#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace lgt {

// Tidy results table: fixed column order, values formatted at insertion so
// two runs with equal seeds produce byte-identical CSVs.
class Table {
  public:
    Table() = default;
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<std::string>>& rows() const { return rows_; }
    size_t n_rows() const { return rows_.size(); }

    class RowBuilder {
      public:
        RowBuilder& add(const std::string& v);
        RowBuilder& add(double v);
        RowBuilder& add(long long v);
        RowBuilder& add(int v) { return add(static_cast<long long>(v)); }
        RowBuilder& add(size_t v) { return add(static_cast<long long>(v)); }
        ~RowBuilder();
        RowBuilder(Table& t) : table_(t) {}
        RowBuilder(const RowBuilder&) = delete;

      private:
        Table& table_;
        std::vector<std::string> cells_;
        friend class Table;
    };

    RowBuilder row() { return RowBuilder(*this); }
    void append_row(std::vector<std::string> cells);

    std::string to_csv() const;
    static Table from_csv(const std::string& text);

    // Column index lookup; throws on unknown names.
    size_t column_index(const std::string& name) const;

  private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

std::string format_double(double v);

// 64-bit FNV-1a content hash, hex-encoded; used for bundle tamper detection.
std::string content_hash(const std::string& data);

// A finished run: tables plus the manifest that records how to reproduce it.
struct ResultBundle {
    std::string scenario;
    std::map<std::string, Table> tables;
    nlohmann::json manifest;

    void write(const std::filesystem::path& dir) const;
    static ResultBundle load(const std::filesystem::path& dir);
};

} // namespace lgt
