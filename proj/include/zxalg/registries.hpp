#pragma once

// Rule registries: the algebraic axiomatisation, the earlier rule set it
// replaces, derived lemmas and the ZH rules (with their ZX translations).
//
// Every entry is an equation between two concrete diagrams.  Whatever shape
// a rule is given here, the soundness sweep decides whether it is right.

#include <numbers>

#include "gadgets.hpp"
#include "rule.hpp"

namespace zxalg {

namespace detail {

using namespace gadget;
using P = std::pair<Diagram, Diagram>;
using V = const Assignment&;
using L = const LegCounts&;

inline RewriteRule make_rule(std::string name, std::string registry, std::vector<ParamSpec> params, BuildFn build) {
    RewriteRule r;
    r.name = std::move(name);
    r.registry = std::move(registry);
    r.params = std::move(params);
    r.build = std::move(build);
    return r;
}

inline const Value& val(V v, const char* name) { return lookup(v, name); }
inline Value ph(V v, const char* name) { return phase(lookup(v, name).num.real()); }
inline Value imag_unit() { return Value(ExactScalar::i()); }
inline int leg(L l, const char* name) { return l.at(name); }

// (Z(1,m,b) (x) id_p) o Z(n,1+p,a) = Z(n,m+p,f(a,b)); the fusion family.
inline RewriteRule fusion_rule(std::string name, std::string registry, Domain dom,
                               std::function<Param(V, const char*)> p,
                               std::function<Value(V)> fused) {
    auto r = make_rule(std::move(name), std::move(registry), {{"a", dom}, {"b", dom}}, [p, fused](V v, L l) -> P {
        auto n = static_cast<std::uint32_t>(leg(l, "n")), m = static_cast<std::uint32_t>(leg(l, "m")),
             k = static_cast<std::uint32_t>(leg(l, "p"));
        Diagram lhs = seq({labeled(Z(n, 1 + k, p(v, "a")), "u", true), par({labeled(Z(1, m, p(v, "b")), "v", true), I(k)})});
        Diagram rhs = labeled(Z(n, m + k, fused(v)), "f");
        return {lhs, rhs};
    });
    r.legs = {{"n", 0, 3}, {"m", 0, 3}, {"p", 0, 2}};
    r.absorb = {{"u", "f"}, {"v", "f"}};
    return r;
}

}  // namespace detail

inline RuleRegistry registry_algebraic() {
    using namespace detail;
    const std::string reg = "algebraic";
    RuleRegistry R{reg, {}};
    auto add = [&](RewriteRule r) { R.rules.push_back(std::move(r)); };

    add(fusion_rule("S1", reg, Domain::Complex, [](V v, const char* n) { return var(v, n); },
                    [](V v) { return val(v, "a") * val(v, "b"); }));
    add(make_rule("S2", reg, {}, [](V, L) -> P { return {Z(1, 1), I()}; }));
    add(make_rule("S3", reg, {}, [](V, L) -> P { return {Z(0, 2), cap()}; }));
    add(make_rule("Ept", reg, {}, [](V, L) -> P { return {par({rt2(), rt2(), half()}), E()}; }));
    add(make_rule("B1", reg, {}, [](V, L) -> P {
        return {par({rt2(), seq({X(0, 1), Z(1, 2)})}), par({X(0, 1), X(0, 1)})};
    }));
    add(make_rule("B2", reg, {}, [](V, L) -> P {
        return {seq({X(2, 1), Z(1, 2)}), par({rt2(), seq({par({Z(1, 2), Z(1, 2)}), sandwich_swap(), par({X(2, 1), X(2, 1)})})})};
    }));
    add(make_rule("EU", reg, {}, [](V, L) -> P {
        Value i = imag_unit();
        return {par({H(), Z(0, 0, i)}), par({rt2(), seq({Z(1, 1, i), X(1, 1, i), Z(1, 1, i)})})};
    }));
    add(make_rule("Brk", reg, {}, [](V, L) -> P {
        return {seq({Z(1, 2), par({I(), seq({NOT(), T()})}), Z(2, 1)}), Z(1, 1, Value(0))};
    }));
    add(make_rule("Bas0", reg, {}, [](V, L) -> P { return {seq({X(0, 1), T()}), X(0, 1)}; }));
    add(make_rule("Bas1", reg, {}, [](V, L) -> P { return {seq({X(0, 1, Value(-1)), T()}), par({rt2(), Z(0, 1)})}; }));
    add(make_rule("Suc", reg, {{"a", Domain::Complex}}, [](V v, L) -> P {
        return {seq({T(), Z(1, 0, var(v, "a"))}), Z(1, 0, val(v, "a") + Value(1))};
    }));
    add(make_rule("Inv", reg, {}, [](V, L) -> P { return {seq({Ti(), T()}), I()}; }));
    add(make_rule("Zero", reg, {}, [](V, L) -> P { return {par({rt2(), Z(1, 0, Value(0))}), X(1, 0)}; }));
    add(make_rule("Pcy", reg, {{"a", Domain::Complex}}, [](V v, L) -> P {
        return {seq({Z(1, 1, var(v, "a")), w_split()}), seq({w_split(), par({Z(1, 1, val(v, "a")), Z(1, 1, val(v, "a"))})})};
    }));
    add(make_rule("Sym", reg, {}, [](V, L) -> P { return {seq({w_split(), Sw()}), w_split()}; }));
    add(make_rule("Aso", reg, {}, [](V, L) -> P {
        return {seq({w_split(), par({w_split(), I()})}), seq({w_split(), par({I(), w_split()})})};
    }));
    return R;
}

inline RuleRegistry registry_legacy() {
    using namespace detail;
    const std::string reg = "legacy";
    RuleRegistry R{reg, {}};
    auto add = [&](RewriteRule r) { R.rules.push_back(std::move(r)); };
    const std::vector<ParamSpec> none;

    // Rules I: angles alpha, beta in [0, 2pi).
    add(fusion_rule("1a", reg, Domain::Angle, [](V v, const char* n) { return angle_var(v, n); },
                    [](V v) { return phase(val(v, "a").num.real() + val(v, "b").num.real()); }));
    add(make_rule("1b", reg, none, [](V, L) -> P { return {Z(0, 2), X(0, 2)}; }));
    add(make_rule("1c", reg, none, [](V, L) -> P { return {Z(1, 1), I()}; }));
    add(make_rule("1d", reg, none, [](V, L) -> P { return {seq({H(), H()}), I()}; }));
    add(make_rule("1e", reg, none, [](V, L) -> P { return {seq({cap(), par({H(), I()})}), seq({cap(), par({I(), H()})})}; }));
    add(make_rule("1f", reg, none, [](V, L) -> P {
        Value q = phase(std::numbers::pi / 2);
        return {par({H(), Z(0, 0, q)}), par({rt2(), seq({X(1, 1, q), Z(1, 1, q), X(1, 1, q)})})};
    }));
    add(make_rule("1g", reg, none, [](V, L) -> P {
        return {par({rt2(), seq({X(0, 1), Z(1, 2)})}), par({X(0, 1), X(0, 1)})};
    }));
    add(make_rule("1h", reg, none, [](V, L) -> P {
        return {seq({X(2, 1), Z(1, 2)}), par({rt2(), seq({par({Z(1, 2), Z(1, 2)}), sandwich_swap(), par({X(2, 1), X(2, 1)})})})};
    }));
    add(make_rule("1i", reg, {{"alpha", Domain::Angle}}, [](V v, L) -> P {
        double a = val(v, "alpha").num.real();
        return {seq({NOT(), Z(1, 2, angle_var(v, "alpha"))}),
                par({scalar(phase(a)), seq({Z(1, 2, phase(-a)), par({NOT(), NOT()})})})};
    }));
    add(make_rule("1j", reg, none, [](V, L) -> P {
        return {par({seq({Z(0, 1), X(1, 0)}), seq({Z(0, 1, Value(0)), H(), Z(1, 0, Value(0))})}), E()};
    }));

    // Rules II: lambda boxes are Z-boxes with nonnegative real parameter.
    add(make_rule("2a", reg, {{"lambda", Domain::NonNegReal}}, [](V v, L) -> P {
        return {Z(1, 2, nonneg_var(v, "lambda")), seq({Z(1, 2), par({Z(1, 1, val(v, "lambda")), I()})})};
    }));
    add(make_rule("2b", reg, none, [](V, L) -> P { return {Z(1, 1, Value(1)), I()}; }));
    add(make_rule("2c", reg, {{"l1", Domain::NonNegReal}, {"l2", Domain::NonNegReal}}, [](V v, L) -> P {
        return {seq({Z(1, 1, nonneg_var(v, "l2")), Z(1, 1, nonneg_var(v, "l1"))}), Z(1, 1, val(v, "l1") * val(v, "l2"))};
    }));
    add(make_rule("2d", reg, none, [](V, L) -> P { return {seq({T(), Z(1, 1, Value(-1)), T()}), Z(1, 1, Value(-1))}; }));
    add(make_rule("2e", reg, none, [](V, L) -> P { return {seq({NOT(), T(), NOT()}), Td()}; }));
    add(make_rule("2f", reg, none, [](V, L) -> P { return {seq({X(0, 1), T()}), X(0, 1)}; }));
    add(make_rule("2g", reg, none, [](V, L) -> P { return {seq({X(0, 1, Value(-1)), T()}), par({rt2(), Z(0, 1)})}; }));
    add(make_rule("2h", reg, none, [](V, L) -> P {
        return {seq({T(), Z(1, 1, Value(-1)), T(), Z(1, 1, Value(-1))}), I()};
    }));
    add(make_rule("2i", reg, none, [](V, L) -> P { return {seq({T(), X(1, 0)}), par({rt2(), Z(1, 0)})}; }));
    add(make_rule("2j", reg, none, [](V, L) -> P { return {par({rt2(), seq({Z(1, 2), par({I(), T()}), X(2, 1)})}), T()}; }));
    add(make_rule("2k", reg, none, [](V, L) -> P { return {seq({Z(1, 2), par({T(), T()}), Z(2, 1)}), T()}; }));
    add(make_rule("2l", reg, none, [](V, L) -> P { return {seq({Z(1, 2), par({Td(), Td()}), Z(2, 1)}), Td()}; }));
    add(make_rule("2m", reg, none, [](V, L) -> P { return {seq({Z(1, 2), par({I(), T()}), Z(2, 1)}), I()}; }));
    add(make_rule("2n", reg, {{"alpha", Domain::Angle}}, [](V v, L) -> P {
        Value p = ph(v, "alpha");
        return {seq({Z(1, 1, angle_var(v, "alpha")), w_split()}), seq({w_split(), par({Z(1, 1, p), Z(1, 1, p)})})};
    }));

    // (2o): adding two weighted phases through the W node.
    auto r2o = make_rule("2o", reg,
                         {{"l1", Domain::NonNegReal},
                          {"alpha", Domain::Angle},
                          {"l2", Domain::NonNegReal},
                          {"beta", Domain::Angle},
                          {"lambda", Domain::NonNegReal, true},
                          {"gamma", Domain::Angle, true}},
                         [](V v, L) -> P {
                             Diagram a = seq({Z(0, 1, angle_var(v, "alpha")), Z(1, 1, nonneg_var(v, "l1"))});
                             Diagram b = seq({Z(0, 1, angle_var(v, "beta")), Z(1, 1, nonneg_var(v, "l2"))});
                             Diagram rhs = seq({Z(0, 1, ph(v, "gamma")), Z(1, 1, val(v, "lambda"))});
                             return {seq({par({a, b}), w_merge()}), rhs};
                         });
    r2o.side_condition_tag = "lambda*e^{i gamma} = l1*e^{i alpha} + l2*e^{i beta}";
    r2o.complete = [](Assignment& v) {
        Value s = val(v, "l1") * ph(v, "alpha") + val(v, "l2") * ph(v, "beta");
        double mag = std::abs(s.num);
        Value lambda(mag);
        if (s.exact) {
            ExactScalar n2 = *s.exact * s.exact->conj();
            if (n2.q().is_zero() && sgn(n2.p().im) == 0)
                if (auto r = exact_sqrt_rational(n2.p().re)) lambda = Value(*r);
        }
        v["lambda"] = lambda;
        v["gamma"] = Value(mag <= 1e-12 ? 0.0 : reduce_angle(std::arg(s.num)));
    };
    r2o.side_condition = [](const Assignment& v, double tol) {
        FloatScalar s = val(v, "l1").num.real() * std::polar(1.0, val(v, "alpha").num.real()) +
                        val(v, "l2").num.real() * std::polar(1.0, val(v, "beta").num.real());
        FloatScalar t = val(v, "lambda").num.real() * std::polar(1.0, val(v, "gamma").num.real());
        return std::abs(s - t) <= tol;
    };
    add(std::move(r2o));
    return R;
}

inline RuleRegistry registry_derived() {
    using namespace detail;
    const std::string reg = "derived";
    RuleRegistry R{reg, {}};
    auto add = [&](RewriteRule r) { R.rules.push_back(std::move(r)); };
    const std::vector<ParamSpec> none;
    const std::vector<ParamSpec> a_only{{"a", Domain::Complex}};
    auto red_pi_dot = [](Param a) { return seq({X(0, 1, Value(-1)), Z(1, 0, std::move(a))}); };

    auto hopf = make_rule("Hopf", reg, {{"a", Domain::Complex}, {"b", Domain::Complex}}, [](V v, L l) -> P {
        auto nz = static_cast<std::uint32_t>(leg(l, "nz")), nx = static_cast<std::uint32_t>(leg(l, "nx"));
        Diagram lhs = seq({labeled(Z(nz, 2, var(v, "a")), "z", true), labeled(X(2, nx, var(v, "b")), "x", true)});
        Diagram rhs = par({labeled(X(0, nx, val(v, "b")), "x2"), labeled(Z(nz, 0, val(v, "a")), "z2"), half()});
        return {lhs, rhs};
    });
    hopf.legs = {{"nz", 0, 3}, {"nx", 0, 3}};
    hopf.absorb = {{"z", "z2"}, {"x", "x2"}};
    add(std::move(hopf));

    auto ivs = make_rule("Ivs", reg, {{"a", Domain::NonZeroComplex}}, [red_pi_dot](V v, L) -> P {
        return {par({red_pi_dot(nonzero_var(v, "a")), red_pi_dot(val(v, "a").inverse()), half()}), E()};
    });
    ivs.side_condition_tag = "a != 0";
    add(std::move(ivs));
    add(make_rule("Picp", reg, none, [](V, L) -> P {
        return {par({rt2(), seq({X(0, 1, Value(-1)), Z(1, 2)})}), par({X(0, 1, Value(-1)), X(0, 1, Value(-1))})};
    }));
    add(make_rule("Com", reg, none, [](V, L) -> P {
        return {seq({NOT(), Z(1, 2)}), seq({Z(1, 2), par({NOT(), NOT()})})};
    }));
    add(make_rule("RPG", reg, none, [](V, L) -> P {
        return {seq({X(0, 1, Value(-1)), Z(1, 0)}), seq({X(0, 1), Z(1, 0)})};
    }));
    auto k2 = make_rule("K2a", reg, {{"a", Domain::NonZeroComplex}}, [](V v, L) -> P {
        const Value& a = val(v, "a");
        return {seq({NOT(), Z(1, 2, nonzero_var(v, "a"))}), par({scalar(a), seq({Z(1, 2, a.inverse()), par({NOT(), NOT()})})})};
    });
    k2.side_condition_tag = "a != 0";
    add(std::move(k2));
    add(make_rule("Sca", reg, {{"a", Domain::Complex}, {"b", Domain::Complex}}, [red_pi_dot](V v, L) -> P {
        return {par({red_pi_dot(var(v, "a")), red_pi_dot(var(v, "b"))}), par({rt2(), red_pi_dot(val(v, "a") * val(v, "b"))})};
    }));
    add(make_rule("Zos", reg, none, [](V, L) -> P { return {Z(0, 0, Value(0)), E()}; }));
    add(make_rule("Sml", reg, {{"a", Domain::Complex}, {"b", Domain::Complex}}, [](V v, L) -> P {
        const Value &a = val(v, "a"), &b = val(v, "b");
        return {par({Z(0, 0, var(v, "a")), Z(0, 0, var(v, "b"))}), Z(0, 0, a + b + a * b)};
    }));
    add(make_rule("Irt", reg, none, [](V, L) -> P {
        return {par({seq({Z(0, 1, Value(0)), H(), Z(1, 0, Value(0))}), rt2()}), E()};
    }));
    add(make_rule("Bas1'", reg, none, [](V, L) -> P { return {X(0, 1, Value(-1)), par({rt2(), seq({Z(0, 1), Ti()})})}; }));
    add(make_rule("IVT", reg, none, [](V, L) -> P { return {Ti(), seq({Z(1, 1, Value(-1)), T(), Z(1, 1, Value(-1))})}; }));
    add(make_rule("Zrp", reg, none, [](V, L) -> P { return {par({rt2(), seq({T(), Z(1, 0, Value(-1))})}), X(1, 0)}; }));
    add(make_rule("Zero'", reg, none, [](V, L) -> P {
        return {par({rt2(), rt2(), Z(1, 1, Value(0))}), par({X(0, 1), X(1, 0)})};
    }));
    add(make_rule("Bas0'", reg, none, [](V, L) -> P { return {seq({T(), X(1, 0, Value(-1))}), X(1, 0, Value(-1))}; }));
    add(make_rule("AD'", reg, {{"a", Domain::Complex}, {"b", Domain::Complex}}, [](V v, L) -> P {
        return {seq({par({Z(0, 1, var(v, "a")), Z(0, 1, var(v, "b"))}), w_merge()}), Z(0, 1, val(v, "a") + val(v, "b"))};
    }));
    add(make_rule("TRPh", reg, a_only, [](V v, L) -> P {
        return {seq({Z(0, 1, var(v, "a")), Td()}), Z(0, 1, val(v, "a") + Value(1))};
    }));
    add(make_rule("H2", reg, none, [](V, L) -> P { return {par({rt2(), H()}), seq({T(), Z(1, 1, Value(-2)), Td()})}; }));
    add(make_rule("BiA", reg, none, [](V, L) -> P {
        return {seq({and_gate(), Z(1, 2)}), seq({par({Z(1, 2), Z(1, 2)}), sandwich_swap(), par({and_gate(), and_gate()})})};
    }));
    add(make_rule("Dis", reg, none, [](V, L) -> P {
        Diagram lhs = seq({par({I(), X(2, 1)}), and_gate()});
        Diagram rhs = seq({par({Z(1, 2), I(2)}), sandwich_swap(), par({and_gate(), and_gate()}), X(2, 1)});
        return {lhs, rhs};
    }));
    add(make_rule("BiAr", reg, none, [](V, L) -> P { return {seq({par({X(0, 1, Value(-1)), I()}), and_gate()}), par({rt2(), I()})}; }));
    add(make_rule("Brkp", reg, a_only, [](V v, L) -> P {
        return {seq({Z(1, 2), par({Z(1, 1, var(v, "a")), seq({NOT(), T()})}), Z(2, 1)}), Z(1, 1, Value(0))};
    }));
    add(make_rule("Brk1'", reg, none, [](V, L) -> P {
        return {par({rt2(), rt2(), seq({Z(1, 2), par({I(), seq({NOT(), Td()})}), Z(2, 1)})}),
                par({X(0, 1, Value(-1)), X(1, 0, Value(-1))})};
    }));
    add(make_rule("TR4g", reg, a_only, [](V v, L) -> P {
        return {seq({Z(1, 2, var(v, "a")), par({I(), T()}), Z(2, 1)}), Z(1, 1, val(v, "a"))};
    }));
    add(make_rule("Hopfgtr", reg, none, [](V, L) -> P {
        return {par({rt2(), seq({X(1, 2), par({I(), T()}), Z(2, 1)})}), seq({NOT(), T()})};
    }));
    add(make_rule("TR19", reg, none, [](V, L) -> P {
        return {seq({Z(1, 2), par({T(), I()})}), seq({Z(1, 2), par({I(), T()}), Sw()})};
    }));
    add(make_rule("TrHopfFlip", reg, none, [](V, L) -> P {
        return {par({rt2(), seq({X(1, 2), par({I(), Td()}), Z(2, 1)})}), Td()};
    }));
    add(make_rule("PiTinvCom", reg, none, [](V, L) -> P { return {seq({NOT(), Ti(), NOT()}), Tid()}; }));
    add(make_rule("And2v", reg, none, [](V, L) -> P {
        return {and_gate(), par({half(), rt2(), seq({translate(HB(2, 1)), H()})})};
    }));
    add(make_rule("AndHX", reg, none, [](V, L) -> P { return {translate(zh_and()), and_gate()}; }));
    return R;
}

inline RuleRegistry registry_zh() {
    using namespace detail;
    const std::string reg = "zh";
    RuleRegistry R{reg, {}};
    auto add = [&](std::string name, std::vector<ParamSpec> ps, BuildFn zh) {
        auto r = make_rule(std::move(name), reg, std::move(ps), nullptr);
        r.zh_build = zh;
        r.build = [zh](V v, L l) -> P {
            auto [a, b] = zh(v, l);
            return {translate(a), translate(b)};
        };
        return &R.rules.emplace_back(std::move(r));
    };
    const std::vector<ParamSpec> none;

    auto* zs1 = add("ZS1", none, [](V, L l) -> P {
        auto n = static_cast<std::uint32_t>(leg(l, "n")), m = static_cast<std::uint32_t>(leg(l, "m")),
             k = static_cast<std::uint32_t>(leg(l, "p"));
        return {seq({labeled(Z(n, 1 + k), "u", true), par({labeled(Z(1, m), "v", true), I(k)})}), labeled(Z(n, m + k), "f")};
    });
    zs1->legs = {{"n", 0, 3}, {"m", 0, 3}, {"p", 0, 2}};
    zs1->absorb = {{"u", "f"}, {"v", "f"}};
    add("ZS2", none, [](V, L) -> P { return {Z(1, 1), I()}; });
    auto* hs1 = add("HS1", {{"a", Domain::Complex}}, [](V v, L l) -> P {
        auto n = static_cast<std::uint32_t>(leg(l, "n")), m = static_cast<std::uint32_t>(leg(l, "m"));
        return {seq({HB(n, 1, var(v, "a")), HB(1, 1), HB(1, m)}), par({HB(n, m, val(v, "a")), zh_scalar(Value(2))})};
    });
    hs1->legs = {{"n", 0, 2}, {"m", 0, 2}};
    add("HS2", none, [](V, L) -> P { return {par({seq({HB(1, 1), HB(1, 1)}), zh_scalar(Value::rational(1, 2))}), I()}; });
    add("BA1", none, [](V, L) -> P {
        return {par({seq({zh_gray(2, 1), Z(1, 2)}), zh_scalar(Value(2))}),
                seq({par({Z(1, 2), Z(1, 2)}), sandwich_swap(), par({zh_gray(2, 1), zh_gray(2, 1)})})};
    });
    add("BA2", none, [](V, L) -> P {
        return {seq({zh_and(), Z(1, 2)}), seq({par({Z(1, 2), Z(1, 2)}), sandwich_swap(), par({zh_and(), zh_and()})})};
    });
    add("M", {{"a", Domain::Complex}, {"b", Domain::Complex}}, [](V v, L) -> P {
        return {seq({par({HB(0, 1, var(v, "a")), HB(0, 1, var(v, "b"))}), Z(2, 1)}), HB(0, 1, val(v, "a") * val(v, "b"))};
    });
    add("U", none, [](V, L) -> P { return {HB(0, 1, Value(1)), Z(0, 1)}; });
    add("A", {{"a", Domain::Complex}, {"b", Domain::Complex}}, [](V v, L) -> P {
        Value avg = (val(v, "a") + val(v, "b")) * Value::rational(1, 2);
        Diagram lhs = seq({Z(0, 2), par({zh_not(), I()}), par({HB(1, 1, var(v, "a")), HB(1, 1, var(v, "b"))}), Z(2, 1)});
        return {lhs, par({HB(0, 1, avg), zh_scalar(Value(2))})};
    });
    add("I", {{"a", Domain::Complex}}, [](V v, L) -> P {
        return {HB(2, 0, var(v, "a")), seq({zh_and(), HB(1, 0, val(v, "a"))})};
    });
    add("O", none, [](V, L) -> P {
        return {seq({par({HB(0, 1, Value(0)), seq({HB(0, 1, Value(0)), zh_not()})}), Z(2, 1)}),
                par({Z(0, 1), zh_scalar(Value(0))})};
    });
    return R;
}

inline std::vector<RuleRegistry> registries_by_name(const std::string& set) {
    if (set == "algebraic") return {registry_algebraic()};
    if (set == "legacy") return {registry_legacy()};
    if (set == "derived") return {registry_derived()};
    if (set == "zh") return {registry_zh()};
    if (set == "all") return {registry_algebraic(), registry_legacy(), registry_derived(), registry_zh()};
    throw std::invalid_argument("unknown rule set '" + set + "'");
}

}  // namespace zxalg
