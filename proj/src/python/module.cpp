#include "flatk/complexes.hpp"
#include "flatk/crystgrp.hpp"
#include "flatk/cupprod.hpp"
#include "flatk/flag.hpp"
#include "flatk/glattice.hpp"
#include "flatk/ktheory.hpp"
#include "flatk/torus.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace flatk;

namespace {

// Arbitrary-precision integers cross the boundary as Python ints.
py::object to_py(const Integer& x)
{
    return py::reinterpret_steal<py::object>(PyLong_FromString(x.get_str().c_str(), nullptr, 10));
}

Integer from_py(const py::handle& h) { return Integer(py::str(py::int_(py::reinterpret_borrow<py::object>(h))).cast<std::string>()); }

py::object to_py(const Rational& q)
{
    static py::object fraction = py::module_::import("fractions").attr("Fraction");
    return fraction(to_py(q.get_num()), to_py(q.get_den()));
}

py::list to_py(const std::vector<Integer>& v)
{
    py::list out;
    for (const auto& x : v)
        out.append(to_py(x));
    return out;
}

py::list to_py(const IntMatrix& m)
{
    py::list out;
    for (const auto& row : m.to_dense())
        out.append(to_py(row));
    return out;
}

py::list to_py(const RatMatrix3& m)
{
    py::list out;
    for (const auto& row : m) {
        py::list r;
        for (const auto& x : row)
            r.append(to_py(x));
        out.append(r);
    }
    return out;
}

py::dict to_py(const CohomologyTable& H)
{
    py::dict out;
    for (const auto& [k, g] : H)
        out[py::int_(k)] = g;
    return out;
}

IntMatrix matrix_from_py(const py::sequence& rows)
{
    std::vector<std::vector<Integer>> dense;
    std::size_t cols = 0;
    for (const auto& row : rows) {
        dense.emplace_back();
        for (const auto& x : row.cast<py::sequence>())
            dense.back().push_back(from_py(x));
        if (dense.size() == 1)
            cols = dense.back().size();
        else if (dense.back().size() != cols)
            throw std::invalid_argument("matrix rows have different lengths");
    }
    return IntMatrix::from_dense(dense, cols);
}

FinAbGroup group_from_py(std::size_t rank, const std::vector<py::int_>& torsion)
{
    std::vector<Integer> orders;
    for (const auto& t : torsion)
        orders.push_back(from_py(t));
    return FinAbGroup(rank, orders);
}

Ring ring_from(const std::string& s)
{
    if (s == "Z")
        return Ring::Z;
    if (s == "Z/2" || s == "Z2")
        return Ring::Z2;
    throw std::invalid_argument("ring must be 'Z' or 'Z/2'");
}

ResourceBudget budget_from(std::optional<double> gib, std::optional<double> hours)
{
    ResourceBudget b;
    if (gib)
        b.memory_gib = *gib;
    if (hours)
        b.hours = *hours;
    return b;
}

py::dict pairing_dict(const CupPairing& P)
{
    py::list products;
    for (const auto& row : P.products) {
        py::list r;
        for (const auto& x : row)
            r.append(to_py(x));
        products.append(r);
    }
    py::dict d;
    d["space"] = P.space;
    d["ring"] = to_string(P.ring);
    d["p"] = P.p;
    d["q"] = P.q;
    d["left"] = P.left;
    d["right"] = P.right;
    d["target"] = P.target;
    d["products"] = products;
    return d;
}

py::dict graded_dict(const GradedKGroups& K)
{
    py::dict d;
    d["grK0"] = K.grK0;
    d["grK1"] = K.grK1;
    d["K0"] = K.total_k0();
    d["K1"] = K.total_k1();
    return d;
}

}  // namespace

PYBIND11_MODULE(_flatk, m)
{
    m.doc() = "Integral cohomology, cup products and graded K-groups of flat manifolds T^n/G";

    py::register_exception<UnknownSpace>(m, "UnknownSpace", PyExc_KeyError);
    py::register_exception<UnknownLattice>(m, "UnknownLattice", PyExc_KeyError);
    py::register_exception<ResourceBudgetExceeded>(m, "ResourceBudgetExceeded", PyExc_MemoryError);
    py::register_exception<NotOriented>(m, "NotOriented", PyExc_ValueError);

    py::class_<FinAbGroup>(m, "FinAbGroup")
        .def(py::init(&group_from_py), py::arg("rank") = 0, py::arg("torsion") = std::vector<py::int_>{},
             "Z^rank + sum Z/d; the orders are brought to divisor-chain form.")
        .def_property_readonly("rank", &FinAbGroup::rank)
        .def_property_readonly("torsion", [](const FinAbGroup& g) { return to_py(g.torsion()); })
        .def("is_zero", &FinAbGroup::is_zero)
        .def("torsion_part", &FinAbGroup::torsion_part)
        .def("__add__", [](const FinAbGroup& a, const FinAbGroup& b) { return a + b; })
        .def("__eq__", [](const FinAbGroup& a, const FinAbGroup& b) { return a == b; })
        .def("__hash__", [](const FinAbGroup& g) { return py::hash(py::str(g.to_string())); })
        .def("__str__", &FinAbGroup::to_string)
        .def("__repr__", [](const FinAbGroup& g) { return "FinAbGroup(" + g.to_string() + ")"; });

    m.def(
        "smith_normal_form",
        [](const py::sequence& rows) {
            auto S = smith_normal_form(matrix_from_py(rows));
            py::dict d;
            d["divisors"] = to_py(S.divisors);
            d["U"] = to_py(S.U);
            d["V"] = to_py(S.V);
            d["D"] = to_py(S.D);
            return d;
        },
        py::arg("matrix"), "U M V = D with U, V unimodular.");
    m.def("cokernel", [](const py::sequence& rows) { return cokernel_invariants(matrix_from_py(rows)); },
          py::arg("matrix"), "Z^rows modulo the column span.");

    m.def("builtin_spaces", &builtin_space_names);
    m.def("cohomology", &cohomology_table, py::arg("space"),
          "H^k from the invariant cochain complex; also accepts 'T1'..'T9' and 'Klein'.");
    m.def("reference_table", [](const std::string& s) { return to_py(reference_table(s)); }, py::arg("space"));
    m.def(
        "homology",
        [](const std::string& name) {
            auto X = space_by_name(name);
            return to_py(CohomologyTable(homology(quotient_chain_complex(X.torus, X.group))));
        },
        py::arg("space"), "H_k from the quotient cellular chain complex.");
    m.def(
        "invariant_ranks",
        [](const std::string& name) {
            auto X = space_by_name(name);
            auto C = invariant_cochain_complex(X.torus, X.group);
            std::vector<std::size_t> r;
            for (int i = 0; i <= X.dimension(); ++i)
                r.push_back(C.rank(-i));
            return r;
        },
        py::arg("space"));
    m.def(
        "flag_homology",
        [](const std::string& name, std::optional<double> gib, std::optional<double> hours) {
            auto X = space_by_name(name);
            SubdivisionCheck check;
            {
                py::gil_scoped_release release;
                check = check_subdivision_invariance(X, budget_from(gib, hours));
            }
            return to_py(CohomologyTable(check.flag));
        },
        py::arg("space"), py::arg("budget_gb") = py::none(), py::arg("budget_hours") = py::none(),
        "Homology of the barycentric flag complex.");

    m.def("abelianization", [](const std::string& text) { return abelianization(parse_presentation(text)); },
          py::arg("presentation"), "Abelianization of a presentation in the text format.");
    m.def("fundamental_group_presentation", [] { return write_presentation(wolf_presentation()); });
    m.def("spin_lift", [] {
        auto R = verify_spin_lift();
        py::list rel;
        for (const auto& c : R.relations)
            rel.append(py::make_tuple(c.relator, c.value.to_string(), c.pass));
        py::dict d;
        d["relations"] = rel;
        d["all_pass"] = R.all_pass();
        return d;
    });

    m.def("builtin_lattices", &builtin_lattice_names);
    m.def("lattice_basis", [](const std::string& n) { return to_py(builtin_lattice(n).basis()); }, py::arg("lattice"));
    m.def(
        "dual_isomorphism",
        [](const std::string& a, const std::string& b) -> py::object {
            auto W = equivariant_isomorphic(dual_lattice(builtin_lattice(a)), builtin_lattice(b));
            if (!W)
                return py::none();
            return to_py(*W);
        },
        py::arg("lattice"), py::arg("other"),
        "An equivariant map taking the dual of `lattice` onto `other`, or None.");
    m.def(
        "invariant_ranks_of_exterior_powers",
        [](const std::string& n) {
            auto Mstar = dual_module(module_of(builtin_lattice(n)));
            std::vector<std::size_t> r;
            for (std::size_t t = 0; t <= 3; ++t)
                r.push_back(invariants(exterior_power(Mstar, t)).group.rank());
            return r;
        },
        py::arg("lattice"), "rank of (wedge^t M*)^G for t = 0..3.");
    m.def("coev_invariant", [](const std::string& n) { return coev_invariant(builtin_lattice(n)); }, py::arg("lattice"));

    m.def(
        "graded_k_groups",
        [](const std::string& space) { return graded_dict(ahss_assemble(cohomology_table(space))); },
        py::arg("space"));
    m.def("mirror_pairs", &mirror_pairs);
    m.def(
        "mirror_check",
        [](const std::string& x, const std::string& y) {
            auto R = mirror_graded_check(x, y);
            auto T = torsion_h_check(x, y);
            py::list tors;
            for (const auto& c : T.comparisons)
                tors.append(py::make_tuple(c.degree, c.dual_degree, c.torsion, c.dual_torsion));
            py::dict d;
            d["space"] = graded_dict(R.graded_space);
            d["dual"] = graded_dict(R.graded_dual);
            d["graded_pass"] = R.pass();
            d["caveat"] = R.caveat;
            d["torsion"] = tors;
            d["torsion_pass"] = T.pass();
            return d;
        },
        py::arg("space"), py::arg("dual"));

    m.def(
        "cup_pairing",
        [](const std::string& space, int p, int q, const std::string& ring, std::optional<double> gib,
           std::optional<double> hours) {
            CupPairing P;
            {
                py::gil_scoped_release release;
                P = cup_pairing(space, p, q, ring_from(ring), budget_from(gib, hours));
            }
            return pairing_dict(P);
        },
        py::arg("space"), py::arg("p"), py::arg("q"), py::arg("ring") = "Z", py::arg("budget_gb") = py::none(),
        py::arg("budget_hours") = py::none(), "products[i][j] = coordinates of g_i u g'_j in H^{p+q}.");
    m.def(
        "splitting_test",
        [](const std::string& space, const std::string& ring, std::optional<double> gib, std::optional<double> hours) {
            SplittingReport R;
            {
                py::gil_scoped_release release;
                R = splitting_test(space, ring_from(ring), budget_from(gib, hours));
            }
            py::dict d = pairing_dict(R.pairing);
            d["exists"] = R.refinement.exists;
            py::list w;
            for (const auto& x : R.refinement.witness)
                w.append(to_py(x));
            d["witness"] = w;
            d["obstruction_generator"] = R.refinement.obstruction_generator
                                             ? py::object(py::int_(*R.refinement.obstruction_generator))
                                             : py::none();
            d["obstruction_value"] =
                R.refinement.obstruction_value ? py::object(to_py(*R.refinement.obstruction_value)) : py::none();
            return d;
        },
        py::arg("space"), py::arg("ring") = "Z", py::arg("budget_gb") = py::none(), py::arg("budget_hours") = py::none(),
        "Whether the cup square form on H^2 has a quadratic refinement.");
}
