#include "core/csv_io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace imtd {

namespace {

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n' || s.back() == ' ')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && s[i] == ' ') ++i;
  return s.substr(i);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : line) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no, const std::string& msg) {
  fail(Errc::parse, path + ":" + std::to_string(line_no) + ": " + msg);
}

void check_header(const std::string& path, const std::string& line,
                  const std::vector<std::string>& expected) {
  const std::vector<std::string> got = split_csv(line);
  if (got == expected) return;
  std::string missing;
  for (const std::string& col : expected) {
    if (std::find(got.begin(), got.end(), col) == got.end()) {
      if (!missing.empty()) missing += ", ";
      missing += col;
    }
  }
  std::string want;
  for (std::size_t i = 0; i < expected.size(); ++i) want += (i ? "," : "") + expected[i];
  std::string msg = "bad header; expected `" + want + "`";
  if (!missing.empty()) msg += "; missing columns: " + missing;
  parse_fail(path, 1, msg);
}

double parse_double(const std::string& path, std::size_t line_no, const std::string& field,
                    const char* column) {
  if (field.empty()) parse_fail(path, line_no, std::string("empty value in column ") + column);
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size()) {
    parse_fail(path, line_no, "invalid number `" + field + "` in column " + column);
  }
  return v;
}

std::uint16_t parse_count(const std::string& path, std::size_t line_no, const std::string& field,
                          const char* column) {
  char* end = nullptr;
  const unsigned long v = std::strtoul(field.c_str(), &end, 10);
  if (field.empty() || end != field.c_str() + field.size() || v > 0xffff) {
    parse_fail(path, line_no, "invalid count `" + field + "` in column " + column);
  }
  return static_cast<std::uint16_t>(v);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::io, "cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io, "cannot open for reading: " + path);
  return in;
}

template <typename Fn>
void for_each_row(const std::string& path, const std::vector<std::string>& header, Fn&& fn) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) fail(Errc::parse, path + ": empty file");
  check_header(path, line, header);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const std::vector<std::string> fields = split_csv(trimmed);
    if (fields.size() != header.size()) {
      parse_fail(path, line_no,
                 "expected " + std::to_string(header.size()) + " fields, got " +
                     std::to_string(fields.size()));
    }
    fn(line_no, fields);
  }
}

}  // namespace

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  // Normalize negative zero so identical values always print identically.
  if (buf[0] == '-') {
    bool all_zero = true;
    for (const char* c = buf + 1; *c; ++c) {
      if (*c != '0' && *c != '.') {
        all_zero = false;
        break;
      }
    }
    if (all_zero) return buf + 1;
  }
  return buf;
}

void save_raw_stream_csv(const std::string& path, std::span<const EncoderFrame> frames) {
  std::ofstream out = open_out(path);
  out << "t,c1,c2,ct,c3\n";
  for (const EncoderFrame& f : frames) {
    out << format_fixed(f.t, 6) << ',' << f.c1 << ',' << f.c2 << ',' << f.ct << ',' << f.c3
        << '\n';
  }
  if (!out) fail(Errc::io, "write failed: " + path);
}

std::vector<EncoderFrame> load_raw_stream_csv(const std::string& path) {
  std::vector<EncoderFrame> frames;
  for_each_row(path, {"t", "c1", "c2", "ct", "c3"}, [&](std::size_t ln, const auto& f) {
    EncoderFrame e;
    e.t = parse_double(path, ln, f[0], "t");
    e.c1 = parse_count(path, ln, f[1], "c1");
    e.c2 = parse_count(path, ln, f[2], "c2");
    e.ct = parse_count(path, ln, f[3], "ct");
    e.c3 = parse_count(path, ln, f[4], "c3");
    frames.push_back(e);
  });
  return frames;
}

void save_joints_csv(const std::string& path, std::span<const JointState> joints) {
  std::ofstream out = open_out(path);
  out << "t,phi1,phi2,phi3,d\n";
  for (const JointState& q : joints) {
    out << format_fixed(q.t, 6) << ',' << format_fixed(q.phi1, 4) << ','
        << format_fixed(q.phi2, 4) << ',';
    if (q.phi3) out << format_fixed(*q.phi3, 4);
    out << ',' << format_fixed(q.d, 3) << '\n';
  }
  if (!out) fail(Errc::io, "write failed: " + path);
}

std::vector<JointState> load_joints_csv(const std::string& path) {
  std::vector<JointState> joints;
  for_each_row(path, {"t", "phi1", "phi2", "phi3", "d"}, [&](std::size_t ln, const auto& f) {
    JointState q;
    q.t = parse_double(path, ln, f[0], "t");
    q.phi1 = parse_double(path, ln, f[1], "phi1");
    q.phi2 = parse_double(path, ln, f[2], "phi2");
    if (f[3].empty()) {
      q.phi3 = std::nullopt;
    } else {
      q.phi3 = parse_double(path, ln, f[3], "phi3");
    }
    q.d = parse_double(path, ln, f[4], "d");
    joints.push_back(q);
  });
  return joints;
}

void save_marker_csv(const std::string& path, const MarkerStream& stream) {
  std::ofstream out = open_out(path);
  out << "t,cx,cy,cz,px,py,pz\n";
  for (const MarkerSample& s : stream.samples) {
    out << format_fixed(s.t, 6) << ',' << format_fixed(s.center.x(), 3) << ','
        << format_fixed(s.center.y(), 3) << ',' << format_fixed(s.center.z(), 3) << ','
        << format_fixed(s.tip.x(), 3) << ',' << format_fixed(s.tip.y(), 3) << ','
        << format_fixed(s.tip.z(), 3) << '\n';
  }
  if (!out) fail(Errc::io, "write failed: " + path);
}

MarkerStream load_marker_csv(const std::string& path) {
  MarkerStream stream;
  for_each_row(path, {"t", "cx", "cy", "cz", "px", "py", "pz"},
               [&](std::size_t ln, const auto& f) {
                 MarkerSample s;
                 s.t = parse_double(path, ln, f[0], "t");
                 s.center = {parse_double(path, ln, f[1], "cx"),
                             parse_double(path, ln, f[2], "cy"),
                             parse_double(path, ln, f[3], "cz")};
                 s.tip = {parse_double(path, ln, f[4], "px"), parse_double(path, ln, f[5], "py"),
                          parse_double(path, ln, f[6], "pz")};
                 stream.samples.push_back(s);
               });
  if (stream.samples.size() >= 2) {
    const double span = stream.samples.back().t - stream.samples.front().t;
    if (span > 0.0) stream.rate = static_cast<double>(stream.samples.size() - 1) / span;
  }
  return stream;
}

void save_triad(const std::string& path, const FrameTriad& triad) {
  std::ofstream out = open_out(path);
  for (int r = 0; r < 3; ++r) {
    out << format_fixed(triad.axes(r, 0), 9) << ' ' << format_fixed(triad.axes(r, 1), 9) << ' '
        << format_fixed(triad.axes(r, 2), 9) << '\n';
  }
  out << format_fixed(triad.origin.x(), 6) << ' ' << format_fixed(triad.origin.y(), 6) << ' '
      << format_fixed(triad.origin.z(), 6) << '\n';
  if (!out) fail(Errc::io, "write failed: " + path);
}

FrameTriad load_triad(const std::string& path) {
  std::ifstream in = open_in(path);
  double rows[4][3];
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 3; ++c) {
      if (!(in >> rows[r][c])) {
        fail(Errc::parse, path + ": expected 4 rows of 3 numbers (rotation rows then origin)");
      }
    }
  }
  FrameTriad triad;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) triad.axes(r, c) = rows[r][c];
  }
  triad.origin = {rows[3][0], rows[3][1], rows[3][2]};
  return triad;
}

void save_aligned_csv(const std::string& path, const AlignmentResult& alignment) {
  if (alignment.channels.size() != 3) fail(Errc::invalid_argument, "alignment must hold 3 channels");
  std::ofstream out = open_out(path);
  out << "t";
  for (const AlignedPair& p : alignment.channels) {
    out << ',' << channel_name(p.channel) << "_device," << channel_name(p.channel)
        << "_reference";
  }
  out << '\n';
  const std::size_t n = alignment.channels[0].t.size();
  for (std::size_t i = 0; i < n; ++i) {
    out << format_fixed(alignment.channels[0].t[i], 6);
    for (const AlignedPair& p : alignment.channels) {
      const int dp = p.channel == Channel::translation ? 3 : 4;
      out << ',' << format_fixed(p.device[i], dp) << ',' << format_fixed(p.reference[i], dp);
    }
    out << '\n';
  }
  if (!out) fail(Errc::io, "write failed: " + path);
}

StreamKind sniff_stream_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) fail(Errc::parse, path + ": empty file");
  const std::vector<std::string> cols = split_csv(trim(line));
  if (cols == std::vector<std::string>{"t", "c1", "c2", "ct", "c3"}) return StreamKind::raw_counts;
  if (cols == std::vector<std::string>{"t", "phi1", "phi2", "phi3", "d"}) return StreamKind::joints;
  fail(Errc::parse, path + ": unrecognized stream header (expected raw counts or joint columns)");
}

}  // namespace imtd
