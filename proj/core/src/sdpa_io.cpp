#include <cctype>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "ltac/sdp.hpp"

namespace ltac {

namespace {

std::string num17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

void write_coeff(std::string& out, int cons, const SdpCoeff& c, int nblocks_psd,
                 double scale) {
  for (const auto& e : c.entries) {
    out += std::to_string(cons) + " " + std::to_string(e.block + 1) + " " +
           std::to_string(e.i + 1) + " " + std::to_string(e.j + 1) + " " +
           num17(scale * e.value) + "\n";
  }
  for (const auto& [idx, v] : c.free_entries) {
    out += std::to_string(cons) + " " + std::to_string(nblocks_psd + 1) + " " +
           std::to_string(idx + 1) + " " + std::to_string(idx + 1) + " " +
           num17(scale * v) + "\n";
  }
}

}  // namespace

std::string export_sdpa(const SdpProblem& p) {
  p.check_shapes();
  int npsd = static_cast<int>(p.psd_blocks.size());
  bool has_free = p.free_size > 0;
  std::string out;
  out += std::to_string(p.num_constraints()) + "\n";
  out += std::to_string(npsd + (has_free ? 1 : 0)) + "\n";
  for (int i = 0; i < npsd; ++i) {
    if (i) out += " ";
    out += std::to_string(p.psd_blocks[i]);
  }
  if (has_free) {
    if (npsd) out += " ";
    out += std::to_string(-p.free_size);
  }
  out += "\n";
  for (int k = 0; k < p.num_constraints(); ++k) {
    if (k) out += " ";
    out += num17(p.b[k]);
  }
  out += "\n";
  // Objective written negated (F0 = -C); see header note.
  write_coeff(out, 0, p.objective, npsd, -1.0);
  for (int k = 0; k < p.num_constraints(); ++k)
    write_coeff(out, k + 1, p.constraints[k], npsd, 1.0);
  return out;
}

namespace {

struct LineReader {
  std::istringstream in;
  int lineno = 0;
  explicit LineReader(const std::string& text) : in(text) {}

  /// Next content line, stripped of % comments; false at end of input.
  bool next(std::string& line) {
    std::string raw;
    while (std::getline(in, raw)) {
      ++lineno;
      auto cut = raw.find('%');
      if (cut != std::string::npos) raw.erase(cut);
      bool blank = true;
      for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
      if (blank) continue;
      line = raw;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw SdpError("sdpa parse error at line " + std::to_string(lineno) + ": " + msg);
  }
};

std::vector<double> parse_numbers(LineReader& r, const std::string& line) {
  std::vector<double> out;
  const char* p = line.data();
  const char* end = p + line.size();
  while (p < end) {
    while (p < end && (std::isspace(static_cast<unsigned char>(*p)) || *p == ',' ||
                       *p == '{' || *p == '}' || *p == '(' || *p == ')'))
      ++p;
    if (p >= end) break;
    double v = 0.0;
    auto res = std::from_chars(p, end, v);
    if (res.ec != std::errc()) r.fail("bad number");
    out.push_back(v);
    p = res.ptr;
  }
  return out;
}

}  // namespace

SdpProblem import_sdpa(const std::string& text) {
  LineReader r(text);
  std::string line;
  SdpProblem p;

  auto read_ints = [&](const char* what) {
    if (!r.next(line)) r.fail(std::string("missing ") + what);
    return parse_numbers(r, line);
  };

  auto mline = read_ints("constraint count");
  if (mline.size() != 1 || mline[0] < 0 || mline[0] != static_cast<int>(mline[0]))
    r.fail("expected constraint count");
  int m = static_cast<int>(mline[0]);

  auto bline = read_ints("block count");
  if (bline.size() != 1 || bline[0] < 1 || bline[0] != static_cast<int>(bline[0]))
    r.fail("expected block count");
  int nblocks = static_cast<int>(bline[0]);

  auto sizes = read_ints("block sizes");
  if (static_cast<int>(sizes.size()) != nblocks) r.fail("block size list length mismatch");
  for (int i = 0; i < nblocks; ++i) {
    double s = sizes[i];
    if (s != static_cast<int>(s) || s == 0) r.fail("bad block size");
    if (s < 0) {
      if (i != nblocks - 1) r.fail("free block must be last");
      p.free_size = static_cast<int>(-s);
    } else {
      p.psd_blocks.push_back(static_cast<int>(s));
    }
  }
  int npsd = static_cast<int>(p.psd_blocks.size());

  auto bvals = read_ints("right-hand side");
  if (static_cast<int>(bvals.size()) != m) r.fail("right-hand side length mismatch");
  p.b = Eigen::Map<const Eigen::VectorXd>(bvals.data(), m);
  p.constraints.resize(m);

  while (r.next(line)) {
    auto vals = parse_numbers(r, line);
    if (vals.size() != 5) r.fail("expected 'cons block i j value'");
    int cons = static_cast<int>(vals[0]);
    int blk = static_cast<int>(vals[1]);
    int i = static_cast<int>(vals[2]);
    int j = static_cast<int>(vals[3]);
    double v = vals[4];
    if (cons < 0 || cons > m) r.fail("constraint index out of range");
    if (blk < 1 || blk > nblocks) r.fail("block index out of range");
    SdpCoeff& dst = (cons == 0) ? p.objective : p.constraints[cons - 1];
    double scale = (cons == 0) ? -1.0 : 1.0;
    if (p.free_size > 0 && blk == npsd + 1) {
      if (i != j) r.fail("free block entries must be diagonal");
      if (i < 1 || i > p.free_size) r.fail("free index out of range");
      dst.add_free(i - 1, scale * v);
    } else {
      int s = p.psd_blocks[blk - 1];
      if (i < 1 || j < i || j > s) r.fail("entry must be in the upper triangle");
      dst.add(blk - 1, i - 1, j - 1, scale * v);
    }
  }
  p.check_shapes();
  return p;
}

}  // namespace ltac
