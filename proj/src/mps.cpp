#include "bebplan/mps.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "bebplan/error.hpp"

namespace bebplan {

namespace {

constexpr const char* kObjectiveRow = "COST";

char sense_code(Sense s) {
  switch (s) {
    case Sense::LessEqual: return 'L';
    case Sense::GreaterEqual: return 'G';
    case Sense::Equal: return 'E';
  }
  return 'E';
}

RowFamily family_from_name(const std::string& name) {
  static const RowFamily families[] = {
      RowFamily::StockBalance, RowFamily::DepotMonotone, RowFamily::OcfMonotone,  RowFamily::Assignment,
      RowFamily::FleetCover,   RowFamily::NcbRange,      RowFamily::CapacityLink, RowFamily::InitialSoc,
      RowFamily::SocBalance,   RowFamily::ChargeTime,    RowFamily::ChargeHeadroom, RowFamily::DepotCoupling,
  };
  for (RowFamily f : families) {
    const std::string prefix = to_string(f) + "_";
    if (name.size() > prefix.size() + 1 && name.compare(0, prefix.size(), prefix) == 0) {
      const char idx = name[prefix.size()];
      const char digit = name[prefix.size() + 1];
      if (std::string("kstip").find(idx) != std::string::npos && std::isdigit(static_cast<unsigned char>(digit))) {
        return f;
      }
    }
  }
  return RowFamily::Custom;
}

}  // namespace

void write_mps(std::ostream& out, const SparseMip& mip) {
  out << std::setprecision(17);
  out << "NAME " << mip.name << "\n";
  out << "ROWS\n";
  out << " N " << kObjectiveRow << "\n";
  for (const auto& r : mip.rows) out << ' ' << sense_code(r.sense) << ' ' << r.name << "\n";

  std::vector<std::vector<std::pair<std::size_t, double>>> by_col(mip.columns.size());
  for (const auto& t : mip.coefficients) by_col[t.col].emplace_back(t.row, t.value);

  out << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (std::size_t j = 0; j < mip.columns.size(); ++j) {
    const Column& c = mip.columns[j];
    if (c.is_integer != in_int) {
      out << " MARKER" << marker++ << " 'MARKER' " << (c.is_integer ? "'INTORG'" : "'INTEND'") << "\n";
      in_int = c.is_integer;
    }
    // Always list the objective entry so columns without coefficients survive.
    out << ' ' << c.name << ' ' << kObjectiveRow << ' ' << c.objective << "\n";
    for (auto [row, value] : by_col[j]) out << ' ' << c.name << ' ' << mip.rows[row].name << ' ' << value << "\n";
  }
  if (in_int) out << " MARKER" << marker++ << " 'MARKER' 'INTEND'\n";

  out << "RHS\n";
  if (mip.objective_constant != 0.0) out << " RHS " << kObjectiveRow << ' ' << -mip.objective_constant << "\n";
  for (const auto& r : mip.rows) {
    if (r.rhs != 0.0) out << " RHS " << r.name << ' ' << r.rhs << "\n";
  }

  out << "BOUNDS\n";
  for (const auto& c : mip.columns) {
    if (c.lower == c.upper) {
      out << " FX BND " << c.name << ' ' << c.lower << "\n";
      continue;
    }
    if (std::isinf(c.lower)) out << " MI BND " << c.name << "\n";
    else out << " LO BND " << c.name << ' ' << c.lower << "\n";
    if (std::isinf(c.upper)) out << " PL BND " << c.name << "\n";
    else out << " UP BND " << c.name << ' ' << c.upper << "\n";
  }
  out << "ENDATA\n";
}

void write_mps(const std::filesystem::path& path, const SparseMip& mip) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  write_mps(out, mip);
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

SparseMip read_mps(std::istream& in) {
  SparseMip mip;
  enum class Section { None, Rows, Columns, Rhs, Ranges, Bounds, Done } section = Section::None;
  std::string objective_row;
  std::unordered_map<std::string, std::size_t> row_index;
  std::unordered_map<std::string, std::size_t> col_index;
  bool in_int = false;
  std::string line;
  int line_no = 0;

  auto error = [&](const std::string& what) {
    return Error(ErrorCode::MpsParse, "line " + std::to_string(line_no) + ": " + what);
  };
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw error("bad number '" + s + "'");
      return v;
    } catch (const std::logic_error&) {
      throw error("bad number '" + s + "'");
    }
  };
  auto column = [&](const std::string& name) -> std::size_t {
    auto it = col_index.find(name);
    if (it != col_index.end()) return it->second;
    Column c;
    c.name = name;
    c.is_integer = in_int;
    const std::size_t j = mip.add_column(c);
    col_index.emplace(name, j);
    return j;
  };
  auto existing_column = [&](const std::string& name) -> Column& {
    auto it = col_index.find(name);
    if (it == col_index.end()) throw error("bound on unknown column " + name);
    return mip.columns[it->second];
  };
  // Applies "ROW value" pairs (COLUMNS and RHS lines carry one or two).
  auto pairs = [&](const std::vector<std::string>& tok, std::size_t from, auto&& apply) {
    if ((tok.size() - from) % 2 != 0 || tok.size() == from) throw error("expected row/value pairs");
    for (std::size_t i = from; i + 1 < tok.size(); i += 2) apply(tok[i], number(tok[i + 1]));
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '*') continue;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;

    if (!std::isspace(static_cast<unsigned char>(line[0]))) {
      const std::string& head = tok[0];
      if (head == "NAME") mip.name = tok.size() > 1 ? tok[1] : "";
      else if (head == "ROWS") section = Section::Rows;
      else if (head == "COLUMNS") section = Section::Columns;
      else if (head == "RHS") section = Section::Rhs;
      else if (head == "RANGES") section = Section::Ranges;
      else if (head == "BOUNDS") section = Section::Bounds;
      else if (head == "OBJSENSE") {
        if (tok.size() > 1 && tok[1] != "MIN" && tok[1] != "MINIMIZE") throw error("only minimisation is supported");
      } else if (head == "ENDATA") {
        section = Section::Done;
        break;
      } else throw error("unknown section " + head);
      continue;
    }

    switch (section) {
      case Section::Rows: {
        if (tok.size() != 2) throw error("ROWS entries need a type and a name");
        const std::string& type = tok[0];
        if (type == "N") {
          if (objective_row.empty()) objective_row = tok[1];
          break;
        }
        Row r;
        r.name = tok[1];
        if (type == "L") r.sense = Sense::LessEqual;
        else if (type == "G") r.sense = Sense::GreaterEqual;
        else if (type == "E") r.sense = Sense::Equal;
        else throw error("unknown row type " + type);
        r.family = family_from_name(r.name);
        if (row_index.count(r.name)) throw error("duplicate row " + r.name);
        row_index.emplace(r.name, mip.add_row(r));
        break;
      }
      case Section::Columns: {
        if (tok.size() >= 3 && tok[1] == "'MARKER'") {
          if (tok[2] == "'INTORG'") in_int = true;
          else if (tok[2] == "'INTEND'") in_int = false;
          else throw error("unknown marker " + tok[2]);
          break;
        }
        const std::size_t j = column(tok[0]);
        pairs(tok, 1, [&](const std::string& row, double v) {
          if (row == objective_row) {
            mip.columns[j].objective = v;
            return;
          }
          auto it = row_index.find(row);
          if (it == row_index.end()) throw error("unknown row " + row);
          mip.add_coefficient(it->second, j, v);
        });
        break;
      }
      case Section::Rhs: {
        // The set name is optional when the line has an odd token count.
        const std::size_t from = tok.size() % 2 == 1 ? 1 : 0;
        pairs(tok, from, [&](const std::string& row, double v) {
          if (row == objective_row) {
            mip.objective_constant = -v;
            return;
          }
          auto it = row_index.find(row);
          if (it == row_index.end()) throw error("unknown row " + row);
          mip.rows[it->second].rhs = v;
        });
        break;
      }
      case Section::Ranges:
        throw error("RANGES are not supported");
        break;
      case Section::Bounds: {
        const std::string& type = tok[0];
        const bool valueless = type == "MI" || type == "PL" || type == "BV" || type == "FR";
        if (tok.size() < (valueless ? 2u : 3u)) throw error("incomplete bound");
        // Bound set name is optional.
        const std::size_t name_at = valueless ? (tok.size() >= 3 ? 2 : 1) : (tok.size() >= 4 ? 2 : 1);
        Column& c = existing_column(tok[name_at]);
        const double v = valueless ? 0.0 : number(tok.at(name_at + 1));
        if (type == "UP") c.upper = v;
        else if (type == "LO") c.lower = v;
        else if (type == "FX") c.lower = c.upper = v;
        else if (type == "MI") c.lower = -kInfinity;
        else if (type == "PL") c.upper = kInfinity;
        else if (type == "FR") {
          c.lower = -kInfinity;
          c.upper = kInfinity;
        } else if (type == "BV") {
          c.lower = 0.0;
          c.upper = 1.0;
          c.is_integer = true;
        } else if (type == "LI") {
          c.lower = v;
          c.is_integer = true;
        } else if (type == "UI") {
          c.upper = v;
          c.is_integer = true;
        } else throw error("unknown bound type " + type);
        break;
      }
      case Section::None:
      case Section::Done:
        throw error("data outside a section");
    }
  }
  if (section != Section::Done) throw Error(ErrorCode::MpsParse, "missing ENDATA");
  mip.check();
  return mip;
}

SparseMip read_mps(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  return read_mps(in);
}

}  // namespace bebplan
