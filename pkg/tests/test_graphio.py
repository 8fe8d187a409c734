import json
import math

import numpy as np
import pytest

import qgtrace as qg
from conftest import hermitian_from_seed


def test_roundtrip_all_potential_kinds(tmp_path):
    edges = (
        qg.Edge(1.0),
        qg.Edge(2.0, qg.ConstantPotential(-0.4)),
        qg.Edge(1.5, qg.PolynomialPotential((0.1, 0.0, 0.3))),
        qg.Edge(1.2, qg.TablePotential([0.0, 0.6, 1.2], [1.0, 0.5, 0.25])),
    )
    h = hermitian_from_seed(13, 4)
    g = qg.MetricGraph(edges, qg.hermitian_coupling(h))
    path = tmp_path / "graph.json"
    qg.dump_graph(g, path)
    g2 = qg.load_graph(path)
    assert np.allclose(g2.lengths, g.lengths)
    assert np.allclose(g2.hermitian.matrix, g.hermitian.matrix)
    xs = np.linspace(0.0, 1.0, 11)
    for e_in, e_out in zip(g.edges, g2.edges):
        assert np.allclose(e_out.potential.value(xs * e_in.length),
                           e_in.potential.value(xs * e_in.length), atol=1e-15)


def test_roundtrip_unitary_and_vertex_couplings(tmp_path):
    c, s = math.cos(0.4), math.sin(0.4)
    rot = np.array([[c, s], [-s, c]], dtype=complex)
    diag = np.diag([1.0, 1j]).astype(complex)
    g = qg.MetricGraph((qg.Edge(1.0), qg.Edge(0.8)),
                       qg.vertex_coupling([(rot, (1, 3)), (diag, (2, 4))]))
    p1 = tmp_path / "vertices.json"
    qg.dump_graph(g, p1)
    g2 = qg.load_graph(p1)
    assert g2.coupling.kind == "vertices"
    assert np.allclose(g2.hermitian.matrix, g.hermitian.matrix, atol=1e-12)

    u = qg.assemble_flower_unitary([(rot, (1, 3)), (diag, (2, 4))], d=2)
    gu = qg.MetricGraph((qg.Edge(1.0), qg.Edge(0.8)), qg.unitary_coupling(u))
    p2 = tmp_path / "unitary.json"
    qg.dump_graph(gu, p2)
    g3 = qg.load_graph(p2)
    assert g3.coupling.kind == "unitary"
    assert np.allclose(g3.hermitian.matrix, g.hermitian.matrix, atol=1e-12)


def test_real_matrix_serializes_without_imag_block():
    g = qg.MetricGraph((qg.Edge(1.0),), qg.hermitian_coupling(np.diag([1.0, 2.0])))
    obj = qg.graph_to_dict(g)
    assert "matrix_imag" not in obj["coupling"]
    assert qg.graph_from_dict(obj).hermitian.matrix[1, 1] == 2.0 + 0.0j


@pytest.mark.parametrize("mutate,needle", [
    (lambda o: o.pop("edges"), "edges"),
    (lambda o: o["edges"][0].pop("length"), "length"),
    (lambda o: o["edges"][0].update(length=-1.0), "length"),
    (lambda o: o["edges"][0]["potential"].update(type="spline"), "spline"),
    (lambda o: o["coupling"].update(type="dirichlet"), "dirichlet"),
    (lambda o: o["coupling"].update(matrix_imag=[[0.0]]), "matrix_imag"),
])
def test_error_messages_name_the_field(mutate, needle):
    base = {
        "edges": [{"length": 1.0, "potential": {"type": "constant", "value": 2.0}}],
        "coupling": {"type": "hermitian", "matrix_real": [[0.0, 0.0], [0.0, 0.0]]},
    }
    mutate(base)
    with pytest.raises(qg.GraphSpecError) as err:
        qg.graph_from_dict(base)
    assert needle in str(err.value)


def test_coupling_size_checked_against_edges():
    obj = {
        "edges": [{"length": 1.0}, {"length": 2.0}],
        "coupling": {"type": "hermitian", "matrix_real": [[0.0, 0.0], [0.0, 0.0]]},
    }
    with pytest.raises(qg.GraphSpecError) as err:
        qg.graph_from_dict(obj)
    assert "2 edges" in str(err.value)


def test_load_rejects_broken_json(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{edges: oops")
    with pytest.raises(qg.GraphSpecError) as err:
        qg.load_graph(bad)
    assert "JSON" in str(err.value)


def test_missing_potential_defaults_to_zero():
    obj = {
        "edges": [{"length": 1.0}],
        "coupling": {"type": "hermitian", "matrix_real": [[0.0, 0.0], [0.0, 0.0]]},
    }
    g = qg.graph_from_dict(obj)
    assert g.has_zero_potential()
