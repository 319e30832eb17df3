#include "spalign/render.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "spalign/error.hpp"

namespace spalign {

void RenderOptions::validate() const {
  if (width < 40) throw UsageError("render width must be >= 40");
}

namespace {

// cell[r][c]: name of row r's symbol in column c, or null.
std::vector<std::vector<const std::string*>> cells_of(const MultipleAlignment& al) {
  std::vector<std::vector<const std::string*>> cell(al.row_count(),
                                                    std::vector<const std::string*>(al.column_count(), nullptr));
  for (std::size_t r = 0; r < al.row_count(); ++r) {
    const auto& row = al.rows()[r];
    for (std::size_t i = 0; i < row.columns.size(); ++i) cell[r][row.columns[i]] = &row.syms()[i].name;
  }
  return cell;
}

std::string scores_line(const MultipleAlignment& al) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "CD = %.4f bits (BN = %.4f, BE = %.4f)\n", al.score().cd, al.score().bn,
                al.score().be);
  return buf;
}

void rtrim(std::string& s) {
  while (!s.empty() && s.back() == ' ') s.pop_back();
}

std::string render_rows(const MultipleAlignment& al) {
  const auto cell = cells_of(al);
  const int C = al.column_count();
  const int R = static_cast<int>(al.row_count());
  const int label = static_cast<int>(std::to_string(R - 1).size());
  std::vector<std::size_t> start(static_cast<std::size_t>(C) + 1, 0);
  for (int c = 0; c < C; ++c) {
    std::size_t w = 1;
    for (int r = 0; r < R; ++r)
      if (cell[r][c]) w = std::max(w, cell[r][c]->size());
    start[c + 1] = start[c] + w + 1;
  }
  const std::size_t body = start[C];
  auto index = [&](int r) {
    std::string s = std::to_string(r);
    return std::string(static_cast<std::size_t>(label) - s.size(), ' ') + s;
  };

  std::string out;
  for (int r = 0; r < R; ++r) {
    if (r > 0) {
      std::string line(static_cast<std::size_t>(label) + 2 + body, ' ');
      bool any = false;
      for (int c = 0; c < C; ++c)
        if (cell[r - 1][c] && cell[r][c]) {
          line[static_cast<std::size_t>(label) + 2 + start[c]] = '|';
          any = true;
        }
      if (any) {
        rtrim(line);
        out += line + "\n";
      }
    }
    std::string line(body, ' ');
    for (int c = 0; c < C; ++c)
      if (cell[r][c]) line.replace(start[c], cell[r][c]->size(), *cell[r][c]);
    out += index(r) + "  " + line + " " + index(r) + "\n";
  }
  return out;
}

std::string render_columns(const MultipleAlignment& al) {
  const auto cell = cells_of(al);
  const int C = al.column_count();
  const int R = static_cast<int>(al.row_count());
  std::vector<std::size_t> width(static_cast<std::size_t>(R));
  for (int r = 0; r < R; ++r) {
    width[r] = std::to_string(r).size();
    for (int c = 0; c < C; ++c)
      if (cell[r][c]) width[r] = std::max(width[r], cell[r][c]->size());
  }
  constexpr std::size_t kGap = 3;
  auto header = [&] {
    std::string line;
    for (int r = 0; r < R; ++r) {
      std::string s = std::to_string(r);
      line += s + std::string(width[r] - s.size() + (r + 1 < R ? kGap : 0), ' ');
    }
    rtrim(line);
    return line + "\n";
  };

  std::string out = header() + "\n";
  for (int c = 0; c < C; ++c) {
    std::string line;
    for (int r = 0; r < R; ++r) {
      const std::string name = cell[r][c] ? *cell[r][c] : "";
      // Dashes join this row's symbol to the next row's when both are here.
      bool join = false;
      for (int s = r + 1; s < R && !join; ++s) {
        if (!cell[r][c]) break;
        if (cell[s][c]) join = true;
      }
      const char fill = join ? '-' : ' ';
      line += name;
      line += std::string(width[r] - name.size(), fill);
      if (r + 1 < R) line += std::string(kGap, fill);
      if (join && !cell[r + 1 < R ? r + 1 : r][c]) {
        // Carry the dashes through rows that have nothing in this column.
        int s = r + 1;
        while (s < R && !cell[s][c]) {
          line += std::string(width[s] + (s + 1 < R ? kGap : 0), '-');
          ++s;
        }
        r = s - 1;
      }
    }
    rtrim(line);
    out += line + "\n";
  }
  out += "\n" + header();
  return out;
}

}  // namespace

std::string render_alignment(const MultipleAlignment& al, const RenderOptions& opts) {
  opts.validate();
  std::string out = opts.show_scores ? scores_line(al) : "";
  out += opts.orientation == Orientation::Rows ? render_rows(al) : render_columns(al);
  return out;
}

std::vector<std::vector<std::string>> parse_rendered(const std::string& text, Orientation orientation) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  std::vector<std::vector<std::string>> rows;

  if (orientation == Orientation::Rows) {
    for (const auto& line : lines) {
      std::istringstream ss(line);
      std::vector<std::string> tok;
      for (std::string t; ss >> t;) tok.push_back(t);
      if (tok.size() < 2 || tok.front() != tok.back()) continue;
      if (tok.front().find_first_not_of("0123456789") != std::string::npos) continue;
      if (std::stoul(tok.front()) != rows.size()) continue;
      rows.emplace_back(tok.begin() + 1, tok.end() - 1);
    }
    return rows;
  }

  // Columns: the first non-empty line after the scores is the header of row
  // indices, whose positions give each row's character column.
  std::size_t h = 0;
  while (h < lines.size() && (lines[h].empty() || lines[h].rfind("CD = ", 0) == 0)) ++h;
  if (h == lines.size()) return rows;
  std::vector<std::size_t> at;
  for (std::size_t i = 0; i < lines[h].size(); ++i)
    if (lines[h][i] != ' ' && (i == 0 || lines[h][i - 1] == ' ')) at.push_back(i);
  rows.resize(at.size());
  // Body: from after the blank line following the header to the blank line
  // before the footer.
  std::size_t b = h + 1;
  while (b < lines.size() && lines[b].empty()) ++b;
  std::size_t e = lines.size();
  while (e > b && (lines[e - 1].empty() || lines[e - 1] == lines[h])) --e;
  for (std::size_t k = b; k < e; ++k) {
    const auto& line = lines[k];
    for (std::size_t r = 0; r < at.size(); ++r) {
      if (at[r] >= line.size()) continue;
      const std::size_t end = r + 1 < at.size() ? std::min(at[r + 1], line.size()) : line.size();
      std::string piece = line.substr(at[r], end - at[r]);
      while (!piece.empty() && (piece.back() == ' ' || piece.back() == '-')) piece.pop_back();
      if (!piece.empty()) rows[r].push_back(piece);
    }
  }
  return rows;
}

}  // namespace spalign
