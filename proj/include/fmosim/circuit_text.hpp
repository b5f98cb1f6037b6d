#pragma once

// Line-oriented circuit text format.
//
//   # qubits 7                 register size (written by export_text)
//   # any other comment
//   X 1
//   RY(0.5) 2
//   CNOT 1 2                   control first
//   CPHASE(3.14159...) 2 1
//   UNITARY 1 2 :              followed by 2^k rows of complex entries
//   (a+bj) ...
//   KRAUS(2) 1 :               followed by 2 rows per operator
//   MEASURE 2                  dephase and discard
//
// Qubits are 1-based. Reals use the shortest representation that round-trips
// exactly; complex entries are written as `re+imj`.

#include <charconv>
#include <sstream>
#include <string>
#include <system_error>

#include "fmosim/circuit.hpp"

namespace fmosim {

inline std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline std::string format_complex(Complex c) {
  std::string s = format_real(c.real());
  const std::string im = format_real(c.imag());
  if (im.front() != '-') s += '+';
  s += im;
  s += 'j';
  return s;
}

namespace detail {

inline void write_rows(std::ostringstream& out, const Matrix& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ' ';
      out << format_complex(m(r, c));
    }
    out << '\n';
  }
}

inline double parse_real(std::string_view s, std::size_t line_no) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("line " + std::to_string(line_no) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

inline Complex parse_complex(std::string_view s, std::size_t line_no) {
  auto fail = [&] {
    return std::invalid_argument("line " + std::to_string(line_no) + ": bad complex '" + std::string(s) + "'");
  };
  if (s.size() < 2 || s.back() != 'j') throw fail();
  s.remove_suffix(1);
  double re = 0.0;
  auto r1 = std::from_chars(s.data(), s.data() + s.size(), re);
  if (r1.ec != std::errc{} || r1.ptr == s.data() + s.size()) throw fail();
  const char* p = r1.ptr;
  if (*p == '+') ++p;
  double im = 0.0;
  auto r2 = std::from_chars(p, s.data() + s.size(), im);
  if (r2.ec != std::errc{} || r2.ptr != s.data() + s.size()) throw fail();
  return {re, im};
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

inline int parse_qubit(const std::string& tok, std::size_t line_no) {
  int q = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), q);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size() || q < 1) {
    throw std::invalid_argument("line " + std::to_string(line_no) + ": bad qubit '" + tok + "'");
  }
  return q;
}

}  // namespace detail

inline std::string export_text(const Program& p) {
  std::ostringstream out;
  out << "# qubits " << p.n_qubits() << '\n';
  for (const auto& ins : p.instructions()) {
    if (const auto* g = std::get_if<Gate>(&ins)) {
      out << gate_name(g->kind);
      if (gate_has_angle(g->kind)) out << '(' << format_real(g->angle) << ')';
      for (int q : g->qubits) out << ' ' << q;
      if (g->kind == GateKind::UNITARY) {
        out << " :\n";
        detail::write_rows(out, g->matrix);
      } else {
        out << '\n';
      }
    } else if (const auto* k = std::get_if<KrausApply>(&ins)) {
      out << "KRAUS(" << k->channel.ops.size() << ") " << k->qubit << " :\n";
      for (const auto& op : k->channel.ops) detail::write_rows(out, Matrix(op));
    } else {
      out << "MEASURE " << std::get<MeasureAndDiscard>(ins).qubit << '\n';
    }
  }
  return out.str();
}

/// Parses export_text output. Without a `# qubits N` header the register
/// size is the largest qubit label used.
inline Program parse_text(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) {
      if (!l.empty() && l.back() == '\r') l.pop_back();
      lines.push_back(l);
    }
  }

  std::vector<Instruction> parsed;
  int declared = 0;
  int max_label = 0;

  auto read_matrix_rows = [&](std::size_t& i, Eigen::Index dim) {
    Matrix m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
      ++i;
      if (i >= lines.size()) throw std::invalid_argument("unexpected end of input inside matrix block");
      auto toks = detail::split_ws(lines[i]);
      if (static_cast<Eigen::Index>(toks.size()) != dim) {
        throw std::invalid_argument("line " + std::to_string(i + 1) + ": expected " + std::to_string(dim) +
                                    " complex entries");
      }
      for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = detail::parse_complex(toks[static_cast<std::size_t>(c)], i + 1);
    }
    return m;
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    auto toks = detail::split_ws(lines[i]);
    if (toks.empty()) continue;
    if (toks[0].front() == '#') {
      if (toks.size() == 3 && toks[0] == "#" && toks[1] == "qubits") declared = detail::parse_qubit(toks[2], line_no);
      continue;
    }

    std::string head = toks[0];
    std::string name = head;
    std::optional<std::string> arg;
    if (auto open = head.find('('); open != std::string::npos) {
      if (head.back() != ')') throw std::invalid_argument("line " + std::to_string(line_no) + ": unbalanced '('");
      name = head.substr(0, open);
      arg = head.substr(open + 1, head.size() - open - 2);
    }
    std::vector<std::string> rest(toks.begin() + 1, toks.end());
    const bool block = !rest.empty() && rest.back() == ":";
    if (block) rest.pop_back();
    std::vector<int> qubits;
    for (const auto& t : rest) {
      qubits.push_back(detail::parse_qubit(t, line_no));
      max_label = std::max(max_label, qubits.back());
    }

    if (name == "MEASURE") {
      if (qubits.size() != 1 || arg || block) throw std::invalid_argument("line " + std::to_string(line_no) + ": MEASURE takes one qubit");
      parsed.emplace_back(MeasureAndDiscard{qubits[0]});
    } else if (name == "KRAUS") {
      if (!arg || !block || qubits.size() != 1) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": expected KRAUS(count) q :");
      }
      const int count = detail::parse_qubit(*arg, line_no);
      std::vector<Matrix2> ops;
      for (int k = 0; k < count; ++k) ops.emplace_back(read_matrix_rows(i, 2));
      parsed.emplace_back(KrausApply{KrausChannel::audited(std::move(ops)), qubits[0]});
    } else if (name == "UNITARY") {
      if (!block || arg || qubits.empty()) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": expected UNITARY q... :");
      }
      Matrix m = read_matrix_rows(i, Eigen::Index{1} << qubits.size());
      parsed.emplace_back(Gate::unitary(std::move(m), qubits));
    } else {
      static const std::pair<const char*, GateKind> kinds[] = {
          {"X", GateKind::X},   {"H", GateKind::H},   {"RX", GateKind::RX},     {"RY", GateKind::RY},
          {"RZ", GateKind::RZ}, {"CZ", GateKind::CZ}, {"CNOT", GateKind::CNOT}, {"CPHASE", GateKind::CPHASE}};
      auto it = std::find_if(std::begin(kinds), std::end(kinds), [&](const auto& kv) { return name == kv.first; });
      if (it == std::end(kinds)) throw std::invalid_argument("line " + std::to_string(line_no) + ": unknown gate '" + name + "'");
      Gate g{it->second, qubits, 0.0, {}};
      if (gate_has_angle(g.kind)) {
        if (!arg) throw std::invalid_argument("line " + std::to_string(line_no) + ": " + name + " needs an angle");
        g.angle = detail::parse_real(*arg, line_no);
      } else if (arg) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": " + name + " takes no angle");
      }
      if (block) throw std::invalid_argument("line " + std::to_string(line_no) + ": unexpected ':'");
      parsed.emplace_back(std::move(g));
    }
  }

  const int n = declared ? declared : std::max(1, max_label);
  Program p(n);
  for (auto& ins : parsed) std::visit([&](auto&& v) { p.add(std::move(v)); }, ins);
  return p;
}

}  // namespace fmosim
