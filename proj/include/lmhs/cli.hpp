// Command line front end: validate instances, run analyses, emit reports.
// Targets are file paths or builtin: URIs (builtin:hashimoto-sano?a=1,
// builtin:conifold?r=2&rank=1&hy=1, builtin:jordan-block?d=1).
//
// Exit codes: 0 verdict computed, 1 validation/parse failure,
// 2 NotDecidable/Indeterminate.

#pragma once

#include "lmhs/report.hpp"

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lmhs {

namespace cli {

inline std::map<std::string, std::string> parse_query(const std::string& q) {
  std::map<std::string, std::string> out;
  std::size_t pos = 0;
  while (pos < q.size()) {
    std::size_t amp = q.find('&', pos);
    std::string kv = q.substr(pos, amp == std::string::npos ? std::string::npos : amp - pos);
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos) fail(Err::Parse, "bad query parameter: " + kv);
    out[kv.substr(0, eq)] = kv.substr(eq + 1);
    if (amp == std::string::npos) break;
    pos = amp + 1;
  }
  return out;
}

struct Target {
  std::optional<SncInstance> instance;
  std::optional<PeriodGerm> germ;  // builtin:jordan-block
  std::string describe;
};

inline Target resolve_target(const std::string& path) {
  Target t;
  t.describe = path;
  if (path.rfind("builtin:", 0) == 0) {
    std::string rest = path.substr(8);
    std::string name = rest;
    std::map<std::string, std::string> query;
    if (auto qm = rest.find('?'); qm != std::string::npos) {
      name = rest.substr(0, qm);
      query = parse_query(rest.substr(qm + 1));
    }
    auto get_num = [&](const std::string& key, long defval) {
      auto it = query.find(key);
      return it == query.end() ? defval : std::stol(it->second);
    };
    if (name == "hashimoto-sano") {
      t.instance = hashimoto_sano_instance(get_num("a", 1));
    } else if (name == "conifold") {
      std::size_t r = static_cast<std::size_t>(get_num("r", 2));
      std::size_t rank = static_cast<std::size_t>(get_num("rank", 1));
      std::size_t hy = static_cast<std::size_t>(get_num("hy", 1));
      t.instance = conifold_instance(default_conifold_spec(r, rank, hy));
    } else if (name == "jordan-block") {
      t.germ = jordan_block_germ(static_cast<std::size_t>(get_num("d", 1)));
    } else {
      fail(Err::Parse, "unknown builtin instance: " + name);
    }
    return t;
  }
  t.instance = load_instance(path);
  return t;
}

inline int cmd_validate(const Target& t, std::ostream& out) {
  if (!t.instance) fail(Err::Parse, "validate needs an SNC instance");
  ValidationReport rep = validate_instance(*t.instance);
  for (auto& i : rep.issues) out << "issue: " << i.where << ": " << i.what << "\n";
  out << (rep.ok() ? "valid" : "invalid") << "\n";
  if (rep.kahler_present)
    out << "kahler: present, " << (rep.kahler_global ? "globally matching" : "per-piece only")
        << "\n";
  return rep.ok() ? 0 : 1;
}

inline int cmd_e1(const Target& t, int m, std::ostream& out) {
  if (!t.instance) fail(Err::Parse, "e1 needs an SNC instance");
  const SncInstance& inst = *t.instance;
  DegreePage page = e1_page(inst, m);
  out << "E1 terms and graded pieces for H^" << m << "\n";
  for (auto& [r, term] : page.middle) {
    if (term.dim == 0 && page.left.at(r).dim == 0 && page.right.at(r).dim == 0) continue;
    GradedPieceData g = graded_piece(inst, page, m + r);
    out << "w=" << (m + r) << ": " << page.left.at(r).dim << " -> " << term.dim << " -> "
        << page.right.at(r).dim << "; Gr dim " << g.dim() << "\n";
  }
  AssembledMiddle A = assemble_middle(inst, page);
  out << "b_" << m << " = ";
  std::size_t b = 0;
  for (auto& [w, g] : A.gr) b += g.dim();
  out << b << "; N graded-isomorphism hypothesis: " << (A.n_iso ? "yes" : "no") << "\n";
  return 0;
}

inline int cmd_distance(const Target& t, std::ostream& out) {
  std::size_t d;
  Distance cls;
  ExactScalar leading;
  if (t.germ) {
    auto p = potential_asymptote(*t.germ);
    d = p.degree;
    leading = p.leading;
    cls = classify_distance(d, std::nullopt);
    if (d == 0) cls = Distance::FiniteConditional;
  } else if (t.instance) {
    MiddleAnalysis a = analyze_middle(*t.instance);
    d = a.potential.degree;
    leading = a.potential.leading;
    cls = a.distance;
  } else {
    fail(Err::Parse, "distance needs an instance or a germ");
  }
  out << "d = " << d << "\n";
  out << "distance = " << to_string(cls) << "\n";
  out << "leading = " << to_string(leading) << "\n";
  out << "witness = " << length_witness(d, cls).integral << "\n";
  return 0;
}

inline int cmd_ddbar(const Target& t, std::ostream& out) {
  if (!t.instance) fail(Err::Parse, "ddbar needs an SNC instance");
  MiddleAnalysis a = analyze_middle(*t.instance);
  out << "ddbar = " << to_cstring(a.ddbar.verdict) << "\n";
  out << "top wedge = " << to_string(a.ddbar.top) << "\n";
  return a.ddbar.verdict == DdbarVerdict::Indeterminate ? 2 : 0;
}

inline int cmd_polarization(const Target& t, std::ostream& out) {
  if (!t.instance) fail(Err::Parse, "polarization needs an SNC instance");
  MiddleAnalysis a = analyze_middle(*t.instance);
  out << "polarized = " << (a.polarization.verdict ? "true" : "false") << "\n";
  out << "signature = (" << a.polarization.positives << ", " << a.polarization.negatives
      << ")\n";
  out << "gr3_polarized = " << (a.gr3_polarized ? "true" : "false") << "\n";
  out << "gr4_positive = " << (a.gr4_positive ? "true" : "false") << "\n";
  // Definitional consistency with the implication route.
  if (a.gr3_polarized && a.gr4_positive && !a.polarization.verdict)
    fail(Err::Consistency, "positivity implication violated");
  return 0;
}

inline int cmd_report(const Target& t, const std::string& outfile, const std::string& format,
                      std::ostream& out) {
  if (!t.instance) fail(Err::Parse, "report needs an SNC instance");
  Report rep = build_report(*t.instance);
  std::string text;
  if (format == "json")
    text = report_to_json(rep).dump(1) + "\n";
  else if (format == "md")
    text = report_to_markdown(rep);
  else
    fail(Err::Parse, "unknown format: " + format);
  if (outfile.empty()) {
    out << text;
  } else {
    std::ofstream f(outfile);
    if (!f) fail(Err::Parse, "cannot open " + outfile);
    f << text;
  }
  return 0;
}

inline int usage(std::ostream& err) {
  err << "usage: lmhs <command> <path | builtin:...> [options]\n"
         "commands:\n"
         "  validate <path>                  check instance invariants\n"
         "  e1 <path> --m <degree>           E1 terms and graded dimensions\n"
         "  distance <path>                  distance index and classification\n"
         "  ddbar <path>                     wedge nonvanishing verdict\n"
         "  polarization <path>              second Hodge-Riemann verdict\n"
         "  report <path> [--out f] [--format json|md]\n"
         "builtins: builtin:hashimoto-sano?a=1, builtin:conifold?r=2&rank=1&hy=1,\n"
         "          builtin:jordan-block?d=1\n"
         "MHS_NO_PARALLEL=1 forces serial per-degree computation in report.\n";
  return 1;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.empty()) return usage(err);
  const std::string& cmd = args[0];
  try {
    if (cmd == "help" || cmd == "--help" || cmd == "-h") {
      usage(out);
      return 0;
    }
    if (args.size() < 2) return usage(err);
    Target t = resolve_target(args[1]);
    if (cmd == "validate") return cmd_validate(t, out);
    if (cmd == "e1") {
      int m = t.instance ? t.instance->fiber_dim : 3;
      for (std::size_t i = 2; i + 1 < args.size(); ++i)
        if (args[i] == "--m") m = std::stoi(args[i + 1]);
      return cmd_e1(t, m, out);
    }
    if (cmd == "distance") return cmd_distance(t, out);
    if (cmd == "ddbar") return cmd_ddbar(t, out);
    if (cmd == "polarization") return cmd_polarization(t, out);
    if (cmd == "report") {
      std::string outfile, format = "json";
      for (std::size_t i = 2; i + 1 < args.size(); ++i) {
        if (args[i] == "--out") outfile = args[i + 1];
        if (args[i] == "--format") format = args[i + 1];
      }
      return cmd_report(t, outfile, format, out);
    }
    return usage(err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (e.kind() == Err::NotDecidable) return 2;
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cli
}  // namespace lmhs
