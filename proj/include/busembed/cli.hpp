#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "busembed/diagonal_solver.hpp"
#include "busembed/exact_solver.hpp"
#include "busembed/experiment.hpp"
#include "busembed/gadget_generator.hpp"
#include "busembed/halfbus_solver.hpp"
#include "busembed/ilp_export.hpp"
#include "busembed/json_io.hpp"
#include "busembed/svg_render.hpp"
#include "busembed/sweep_solver.hpp"

namespace busembed {

namespace cli_detail {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

inline ColoredPointSet load_instance(const std::string& path,
                                     const std::string& eps_override) {
  auto inst = instance_from_json_text(slurp(path));
  if (!eps_override.empty()) inst.epsilon = Rat::parse(eps_override);
  return inst;
}

inline std::vector<int> parse_pi(const std::string& text) {
  std::vector<int> pi;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) pi.push_back(std::stoi(tok));
  return pi;
}

inline std::string witness_json(const ColoredPointSet& inst,
                                const OrderWitness& w) {
  std::string out = "{\n  \"feasible\": false,\n  \"witness\": {\"point\": ";
  out += std::to_string(w.point);
  out += ", \"crossed_bus\": ";
  detail::escape_to(out, inst.color_names[w.color]);
  out += "}\n}\n";
  return out;
}

}  // namespace cli_detail

// Exit codes: 0 feasible / success, 1 infeasible or invalid, 2 usage and
// input errors.
inline int cli_main(std::vector<std::string> args, std::ostream& out,
                    std::ostream& err) {
  CLI::App app{"bus embeddability solvers"};
  app.require_subcommand(1);

  std::string instance_path, layout_path, order_text, eps_text, out_path,
      variant, dump_cnf, cnf_path, sidecar_path, pi_text, l_list = "2,3,4";
  bool minimize = false, oracle = false, emit_word = false, force = false,
       center_main = true;
  std::string emit_svg;
  ExperimentConfig ecfg;

  auto* solve = app.add_subcommand("solve", "decide BEP / restricted variants");
  solve->add_option("--instance", instance_path)->required();
  solve->add_option("--epsilon", eps_text);
  solve->add_option("--variant", variant)
      ->check(CLI::IsMember({"sqcap", "sqcup", "halfbus"}));
  solve->add_flag("--minimize-ink", minimize);
  solve->add_flag("--oracle", oracle);
  solve->add_option("--dump-cnf", dump_cnf);

  auto* solve_order = app.add_subcommand("solve-order",
                                         "decide BEP for a fixed bus order");
  solve_order->add_option("--instance", instance_path)->required();
  solve_order->add_option("--order", order_text)->required();
  solve_order->add_option("--epsilon", eps_text);

  auto* diagonal = app.add_subcommand("diagonal", "diagonal instances");
  diagonal->add_option("--pi", pi_text)->required();
  diagonal->add_flag("--emit-word", emit_word);
  diagonal->add_option("--emit-svg", emit_svg);

  auto* export_ilp = app.add_subcommand("export-ilp", "write the LP model");
  export_ilp->add_option("--instance", instance_path)->required();
  export_ilp->add_option("--out", out_path)->required();

  auto* gadget = app.add_subcommand("gadget",
                                    "build a BEP^eps instance from 3-CNF");
  gadget->add_option("--cnf", cnf_path)->required();
  gadget->add_option("--layout", sidecar_path);
  gadget->add_option("--out", out_path)->required();
  gadget->add_flag("--center-main", center_main);

  auto* experiment = app.add_subcommand("experiment", "feasibility rates");
  experiment->add_option("--k-min", ecfg.k_min);
  experiment->add_option("--k-max", ecfg.k_max);
  experiment->add_option("--l", l_list, "points per color, comma separated");
  experiment->add_option("--trials", ecfg.trials);
  experiment->add_option("--seed", ecfg.seed);
  experiment->add_option("--threads", ecfg.threads);
  experiment->add_option("--exact-cap", ecfg.exact_color_cap);
  experiment->add_option("--out", out_path);

  auto* render = app.add_subcommand("render", "draw an instance and layout");
  render->add_option("--instance", instance_path)->required();
  render->add_option("--layout", layout_path)->required();
  render->add_option("--out", out_path);
  render->add_flag("--force", force);

  auto* validate = app.add_subcommand("validate", "check a layout");
  validate->add_option("--instance", instance_path)->required();
  validate->add_option("--layout", layout_path)->required();
  validate->add_option("--epsilon", eps_text);

  std::vector<const char*> argv;
  std::string prog = "busembed";
  argv.push_back(prog.c_str());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse((int)argv.size(), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (solve->parsed()) {
      auto inst = cli_detail::load_instance(instance_path, eps_text);
      if (variant == "sqcap" || variant == "sqcup") {
        auto r = variant == "sqcap" ? solve_sqcap(inst) : solve_sqcup(inst);
        const ColoredPointSet& solved = r.prepared ? *r.prepared : inst;
        if (!r.feasible) {
          out << "{\n  \"feasible\": false,\n  \"residue_points\": "
              << r.residue.size() << "\n}\n";
          return 1;
        }
        out << layout_to_json(solved, r.layout);
        err << "variant: " << variant
            << "\noperations: " << r.operations << "\n";
        return 0;
      }
      if (variant == "halfbus") {
        auto clauses = build_clauses(inst);
        if (!dump_cnf.empty())
          cli_detail::spill(dump_cnf, clauses.formula.to_dimacs());
        auto r = solve_halfbep(inst);
        if (!r.feasible) {
          out << "{\n  \"feasible\": false\n}\n";
          return 1;
        }
        out << layout_to_json(inst, r.layout);
        err << "variant: halfbus\nclauses: " << clauses.formula.clauses.size()
            << "\n";
        return 0;
      }
      EpsilonPolicy eps(inst.epsilon);
      if (minimize) {
        auto exact = solve_bep(inst, eps);
        const ColoredPointSet& solved =
            exact.prepared ? *exact.prepared : inst;
        if (!exact.feasible) {
          out << "{\n  \"feasible\": false\n}\n";
          return 1;
        }
        auto best = minimize_ink(solved, BusOrder{exact.order}, eps);
        out << layout_to_json(solved, best.layout);
        err << "ink: " << best.total_ink.str()
            << "\norder:" << [&] {
                 std::string s;
                 for (int c : exact.order) s += " " + solved.color_names[c];
                 return s;
               }()
            << "\n";
        return 0;
      }
      auto r = oracle ? enumerate_orders_oracle(inst, eps) : solve_bep(inst, eps);
      const ColoredPointSet& solved = r.prepared ? *r.prepared : inst;
      if (!r.feasible) {
        out << "{\n  \"feasible\": false\n}\n";
        err << "states: " << r.states_visited << "\n";
        return 1;
      }
      out << layout_to_json(solved, r.layout);
      err << "states: " << r.states_visited << "\norder:";
      for (int c : r.order) err << " " << solved.color_names[c];
      err << "\n";
      return 0;
    }

    if (solve_order->parsed()) {
      auto inst = cli_detail::load_instance(instance_path, eps_text);
      auto prepared =
          inst.general_position() ? inst : dedupe_coordinates(inst);
      std::vector<std::string> names;
      std::stringstream ss(order_text);
      std::string tok;
      while (std::getline(ss, tok, ',')) names.push_back(tok);
      auto order = parse_order(prepared, names);
      auto r = solve_with_order(prepared, order, EpsilonPolicy(prepared.epsilon));
      if (!r.feasible) {
        out << cli_detail::witness_json(prepared, r.witness);
        return 1;
      }
      out << layout_to_json(prepared, r.layout);
      return 0;
    }

    if (diagonal->parsed()) {
      auto pi = cli_detail::parse_pi(pi_text);
      auto r = solve_diagonal(pi);
      if (!r.feasible) {
        out << "{\n  \"feasible\": false\n}\n";
        return 1;
      }
      if (emit_word)
        out << word_to_string(r.word) << "\n";
      else
        out << "{\n  \"feasible\": true,\n  \"word\": \""
            << word_to_string(r.word) << "\"\n}\n";
      if (!emit_svg.empty())
        cli_detail::spill(emit_svg,
                          render_svg(r.drawing->instance, r.drawing->layout));
      return 0;
    }

    if (export_ilp->parsed()) {
      auto inst = cli_detail::load_instance(instance_path, eps_text);
      auto model = build_model(inst);
      cli_detail::spill(out_path, write_lp(model));
      err << "variables: " << model.vars.size()
          << "\nconstraints: " << model.constraints.size() << "\n";
      return 0;
    }

    if (gadget->parsed()) {
      auto cnf = parse_dimacs(cli_detail::slurp(cnf_path));
      FormulaLayout layout = default_layout(cnf);
      if (!sidecar_path.empty()) {
        auto j = parse_exact_json(cli_detail::slurp(sidecar_path));
        if (const ExactJson* vo = j.find("variable_order")) {
          layout.variable_order.clear();
          for (const auto& v : vo->arr)
            layout.variable_order.push_back((int)v.as_number().num());
        }
        if (const ExactJson* sides = j.find("sides")) {
          layout.clause_on_top.clear();
          for (const auto& s : sides->arr)
            layout.clause_on_top.push_back(s.as_string() == "top");
        }
      }
      (void)center_main;  // the emitted construction is the center-bus variant
      auto g = build_instance(cnf, layout);
      std::string text = instance_to_json(g.instance);
      // append the role metadata needed to decode assignments
      text.erase(text.rfind("}"));
      text.erase(text.rfind("\n"));
      text += ",\n  \"metadata\": {\"variables\": {";
      for (int v = 0; v < g.formula.num_vars; ++v) {
        if (v) text += ", ";
        text += "\"" + std::to_string(v + 1) + "\": \"" +
                g.instance.color_names[g.variable_color[v]] + "\"";
      }
      text += "}, \"clause_points\": [";
      for (size_t i = 0; i < g.clause_points.size(); ++i) {
        if (i) text += ", ";
        text += std::to_string(g.clause_points[i]);
      }
      text += "]}\n}\n";
      cli_detail::spill(out_path, text);
      return 0;
    }

    if (experiment->parsed()) {
      ecfg.points_per_color.clear();
      std::stringstream ss(l_list);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        ecfg.points_per_color.push_back(std::stoi(tok));
      }
      auto table = run_experiment(ecfg);
      std::string csv = rate_table_csv(table, ecfg);
      if (out_path.empty())
        out << csv;
      else
        cli_detail::spill(out_path, csv);
      return 0;
    }

    if (render->parsed()) {
      auto inst = cli_detail::load_instance(instance_path, eps_text);
      auto layout = layout_from_json(
          parse_exact_json(cli_detail::slurp(layout_path)), inst);
      RenderOptions opt;
      opt.force = force;
      std::string svg = render_svg(inst, layout, opt);
      if (out_path.empty())
        out << svg;
      else
        cli_detail::spill(out_path, svg);
      return 0;
    }

    if (validate->parsed()) {
      auto inst = cli_detail::load_instance(instance_path, eps_text);
      auto layout = layout_from_json(
          parse_exact_json(cli_detail::slurp(layout_path)), inst);
      auto report = validate_planarity(inst, layout, EpsilonPolicy(inst.epsilon));
      if (report.empty()) {
        out << "valid\n";
        return 0;
      }
      for (const auto& v : report) {
        switch (v.kind) {
          case ViolationKind::connection_crossing:
            out << "crossing: connection of point " << v.point << " through bus "
                << inst.color_names[v.color_a] << "\n";
            break;
          case ViolationKind::point_on_bus:
            out << "point " << v.point << " lies on bus "
                << inst.color_names[v.color_a] << "\n";
            break;
          case ViolationKind::bus_overlap:
            out << "buses " << inst.color_names[v.color_a] << " and "
                << inst.color_names[v.color_b] << " overlap at equal height\n";
            break;
          case ViolationKind::epsilon_distance:
            out << "point " << v.point << " closer than epsilon to bus "
                << inst.color_names[v.color_a] << "\n";
            break;
        }
      }
      return 1;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "no subcommand\n";
  return 2;
}

}  // namespace busembed
