#pragma once

#include "bigint.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace vlcm {

// Lightweight interpreter for the combinational Verilog subset produced by
// emit_rtl: wire/reg declarations, continuous assigns over +, -, ^, &, |,
// slices, sized literals and zero-padding concatenations, and constant-table
// case blocks. Width handling follows Verilog-2001 context sizing: operands
// are evaluated at the widest involved width and the result is truncated to
// the assigned net. Used to cross-check emission against the graph evaluator
// without an external simulator.
class RtlModule {
  public:
    static RtlModule parse(const std::string& verilog_text);

    const std::string& name() const { return name_; }
    const std::vector<std::pair<std::string, unsigned>>& inputs() const { return inputs_; }
    const std::vector<std::pair<std::string, unsigned>>& outputs() const { return outputs_; }

    std::map<std::string, BigUint> run(const std::map<std::string, BigUint>& input_values) const;

    struct Expr;

  private:
    struct CaseArm {
        BigUint match;
        BigUint value;
    };
    struct Statement {
        std::string lhs;
        std::shared_ptr<Expr> expr;       // assign form
        std::string case_selector;        // case form
        std::vector<CaseArm> case_arms;
    };

    std::string name_;
    std::vector<std::pair<std::string, unsigned>> inputs_;
    std::vector<std::pair<std::string, unsigned>> outputs_;
    std::map<std::string, unsigned> widths_;
    std::vector<Statement> statements_;
};

}  // namespace vlcm
