#include <algorithm>
#include <cstdio>
#include <sstream>

#include "polyparse/evaluation.hpp"

namespace polyparse {

namespace {

std::string fixed2(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.2f", value);
  return buffer;
}

std::string pad(const std::string& text, std::size_t width) {
  return text.size() >= width ? text : text + std::string(width - text.size(), ' ');
}

struct OffDiagonal {
  std::size_t row;
  std::size_t col;
};

std::vector<OffDiagonal> comparisons(const Grid& grid) {
  std::vector<OffDiagonal> cells;
  for (std::size_t r = 0; r < grid.languages.size(); ++r) {
    if (!grid.cells[r][r].present) continue;
    for (std::size_t c = 0; c < grid.languages.size(); ++c) {
      if (c != r && grid.cells[r][c].present) cells.push_back({r, c});
    }
  }
  return cells;
}

}  // namespace

std::string annotate(double bilingual, double monolingual, double p_value) {
  const bool significant = p_value < kSignificanceLevel;
  if (bilingual >= monolingual) return significant ? "++" : "+";
  return significant ? "--" : "-";
}

GridSummary summarize(const Grid& grid) {
  GridSummary summary;
  std::vector<double> p_las;
  std::vector<double> p_uas;
  const auto cells = comparisons(grid);
  for (const auto& [r, c] : cells) {
    const GridCell& mono = grid.cells[r][r];
    const GridCell& bi = grid.cells[r][c];
    const auto las = annotate(bi.las, mono.las, bi.p_las);
    const auto uas = annotate(bi.uas, mono.uas, bi.p_uas);
    ++summary.comparisons;
    if (las != "--") ++summary.las_not_significantly_worse;
    if (uas != "--") ++summary.uas_not_significantly_worse;
    if (las == "++") ++summary.las_significant_gains;
    if (uas == "++") ++summary.uas_significant_gains;
    p_las.push_back(bi.p_las);
    p_uas.push_back(bi.p_uas);
  }
  if (!cells.empty()) {
    for (std::size_t k : benjamini_hochberg(p_las, kGridFalseDiscoveryRate)) {
      const auto& [r, c] = cells[k];
      if (grid.cells[r][c].las >= grid.cells[r][r].las) ++summary.las_gains_after_bh;
    }
    for (std::size_t k : benjamini_hochberg(p_uas, kGridFalseDiscoveryRate)) {
      const auto& [r, c] = cells[k];
      if (grid.cells[r][c].uas >= grid.cells[r][r].uas) ++summary.uas_gains_after_bh;
    }
  }
  return summary;
}

std::string grid_report(const Grid& grid) {
  const std::size_t width = 9;
  std::size_t label_width = 6;
  for (const auto& lang : grid.languages) label_width = std::max(label_width, lang.size() + 5);
  std::ostringstream out;
  out << pad("", label_width);
  for (const auto& lang : grid.languages) out << pad(lang, width);
  out << '\n';
  for (std::size_t r = 0; r < grid.languages.size(); ++r) {
    const GridCell& mono = grid.cells[r][r];
    for (int line = 0; line < 2; ++line) {
      const bool las_line = line == 0;
      out << pad(line == 0 ? grid.languages[r] + " LAS" : "   UAS", label_width);
      for (std::size_t c = 0; c < grid.languages.size(); ++c) {
        const GridCell& cell = grid.cells[r][c];
        std::string text;
        if (cell.present) {
          const double value = las_line ? cell.las : cell.uas;
          text = fixed2(value);
          if (c != r && mono.present) {
            text += annotate(value, las_line ? mono.las : mono.uas, las_line ? cell.p_las : cell.p_uas);
          }
        } else {
          text = "n/a";
        }
        out << pad(text, width);
      }
      out << '\n';
    }
  }
  const GridSummary s = summarize(grid);
  out << '\n';
  out << "comparisons: " << s.comparisons << '\n';
  out << "not significantly worse (p<0.05): LAS " << s.las_not_significantly_worse << ", UAS "
      << s.uas_not_significantly_worse << '\n';
  out << "significant gains (p<0.05): LAS " << s.las_significant_gains << ", UAS " << s.uas_significant_gains
      << '\n';
  out << "gains after Benjamini-Hochberg (FDR 0.20): LAS " << s.las_gains_after_bh << ", UAS "
      << s.uas_gains_after_bh << '\n';
  return out.str();
}

std::string grid_tsv(const Grid& grid) {
  std::ostringstream out;
  out << "eval_lang\tpartner\tlas\tuas\tp_las\tp_uas\tmark_las\tmark_uas\n";
  char p_las[32];
  char p_uas[32];
  for (std::size_t r = 0; r < grid.languages.size(); ++r) {
    const GridCell& mono = grid.cells[r][r];
    for (std::size_t c = 0; c < grid.languages.size(); ++c) {
      const GridCell& cell = grid.cells[r][c];
      if (!cell.present) continue;
      const bool diagonal = r == c || !mono.present;
      std::snprintf(p_las, sizeof p_las, "%.6g", cell.p_las);
      std::snprintf(p_uas, sizeof p_uas, "%.6g", cell.p_uas);
      out << grid.languages[r] << '\t' << grid.languages[c] << '\t' << fixed2(cell.las) << '\t' << fixed2(cell.uas)
          << '\t' << (diagonal ? "-" : p_las) << '\t' << (diagonal ? "-" : p_uas) << '\t'
          << (diagonal ? "" : annotate(cell.las, mono.las, cell.p_las)) << '\t'
          << (diagonal ? "" : annotate(cell.uas, mono.uas, cell.p_uas)) << '\n';
    }
  }
  return out.str();
}

}  // namespace polyparse
