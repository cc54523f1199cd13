"""Built-in example networks used by tests, docs, and the demo workspace."""

from __future__ import annotations

from .bn.model import (
    Arrow,
    BayesianNetwork,
    VariableKind,
    add_arrow,
    add_variable,
    make_variable,
    new_network,
    set_cpt_row,
)


def drug_cheat_network() -> BayesianNetwork:
    """Five-variable doping-investigation network.

    An athlete competes in one of three events with different base rates of
    drug cheating; two blood-sample tests bear on the question, and a
    legitimate medication (M879) can trigger a false positive on the first,
    less specific test.  The Event prior is deliberately left unspecified:
    completion spreads the mass uniformly, which is the documented default.
    """
    net = new_network()
    net = add_variable(
        net,
        make_variable(
            "Event",
            VariableKind.UNORDERED,
            ["Weightlifting", "Running", "Swimming"],
            var_id="event",
            description="Which sport the athlete competes in.",
        ),
    )
    net = add_variable(
        net,
        make_variable(
            "Drug Cheat",
            VariableKind.BOOLEAN,
            var_id="drug_cheat",
            is_target=True,
            description="Whether the athlete has taken performance-enhancing drugs.",
        ),
    )
    net = add_variable(
        net,
        make_variable(
            "Taking M879",
            VariableKind.BINARY,
            ["yes", "no"],
            var_id="m879",
            description="Whether the athlete takes the (legal) medication M879.",
        ),
    )
    net = add_variable(
        net,
        make_variable(
            "Sample A Result",
            VariableKind.BINARY,
            ["positive", "negative"],
            var_id="sample_a",
            description="Screening test; M879 can trigger a false positive.",
        ),
    )
    net = add_variable(
        net,
        make_variable(
            "Sample B Result",
            VariableKind.BINARY,
            ["positive", "negative"],
            var_id="sample_b",
            description="Confirmatory test, unaffected by M879.",
        ),
    )
    net = add_arrow(net, Arrow("event", "drug_cheat"))
    net = add_arrow(net, Arrow("drug_cheat", "sample_a"))
    net = add_arrow(net, Arrow("m879", "sample_a"))
    net = add_arrow(net, Arrow("drug_cheat", "sample_b"))

    net = set_cpt_row(net, "drug_cheat", ("Weightlifting",), {"True": 0.04, "False": 0.96})
    net = set_cpt_row(net, "drug_cheat", ("Running",), {"True": 0.02, "False": 0.98})
    net = set_cpt_row(net, "drug_cheat", ("Swimming",), {"True": 0.01, "False": 0.99})
    net = set_cpt_row(net, "m879", (), {"yes": 0.03, "no": 0.97})
    net = set_cpt_row(net, "sample_a", ("True", "yes"), {"positive": 0.53, "negative": 0.47})
    net = set_cpt_row(net, "sample_a", ("True", "no"), {"positive": 0.77, "negative": 0.23})
    net = set_cpt_row(net, "sample_a", ("False", "yes"), {"positive": 0.62, "negative": 0.38})
    net = set_cpt_row(net, "sample_a", ("False", "no"), {"positive": 0.02, "negative": 0.98})
    net = set_cpt_row(net, "sample_b", ("True",), {"positive": 0.95, "negative": 0.05})
    net = set_cpt_row(net, "sample_b", ("False",), {"positive": 0.02, "negative": 0.98})
    return net
