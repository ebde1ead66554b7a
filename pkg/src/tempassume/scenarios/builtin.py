import logging

from tempassume.scenario import Scenario, load_scenario, scenario

logger = logging.getLogger(__name__)


@scenario(
    name="structure-threshold-4-1",
    description="Cover conditions of threshold(4,1), cross-checked by brute force.",
    criterion="structure conditions",
)
def structure_threshold_4_1() -> Scenario:
    return load_scenario(
        """
        name: structure-threshold-4-1
        protocol: structure-check
        structure: threshold(4,1)
        maximal: 3
        """
    )


@scenario(
    name="structure-two-pairs",
    description="Two disjoint pairs cover four players: neither condition holds.",
    criterion="structure conditions",
)
def structure_two_pairs() -> Scenario:
    return load_scenario(
        """
        name: structure-two-pairs
        protocol: structure-check
        structure: sets(4; 0 1, 2 3)
        """
    )


@scenario(
    name="vss-honest",
    description="An honest dealer always passes the cut-and-choose rounds.",
    criterion="verifiable sharing soundness",
)
def vss_honest() -> Scenario:
    return load_scenario(
        """
        name: vss-honest
        protocol: vss
        structure: threshold(3,1)
        k: 8
        trials: 1000
        """
    )


@scenario(
    name="vss-soundness",
    description="A dealer with one inconsistent copy passes 8 rounds with frequency about 2^-8.",
    criterion="verifiable sharing soundness",
)
def vss_soundness() -> Scenario:
    return load_scenario(
        """
        name: vss-soundness
        protocol: vss
        structure: threshold(3,1)
        k: 8
        misdealt: 1
        trials: 100000
        """
    )


@scenario(
    name="temporary-assumption",
    description=(
        "Partially robust commitment under threshold(3,1) with M={2}; after commit the "
        "coalition M^c={0,1} joins, and every coalition that must stay ignorant does."
    ),
    criterion="commitment concealing",
)
def temporary_assumption() -> Scenario:
    return load_scenario(
        """
        name: temporary-assumption
        protocol: commit-partial
        structure: threshold(3,1)
        maximal: 2
        sender: 0
        receiver: 2
        k: 2
        after-commit: 0 1
        checks: concealing
        trials: 20
        """
    )


@scenario(
    name="commit-concealing-n4",
    description="Exact concealment and binding of the partially robust commitment for four players.",
    criterion="commitment concealing and binding",
)
def commit_concealing_n4() -> Scenario:
    return load_scenario(
        """
        name: commit-concealing-n4
        protocol: commit-partial
        structure: threshold(4,1)
        maximal: 3
        sender: 0
        receiver: 1
        k: 1
        checks: concealing, binding
        trials: 20
        """
    )


@scenario(
    name="commit-flip",
    description="A flipping sender colluding within the adversary structure is always rejected.",
    criterion="commitment binding",
)
def commit_flip() -> Scenario:
    return load_scenario(
        """
        name: commit-flip
        protocol: commit-partial
        structure: threshold(3,1)
        sender: 0
        receiver: 1
        message: 1
        strategy: 0 unveil-flipper 0
        checks: binding
        trials: 50
        """
    )


@scenario(
    name="robust-false-complainer",
    description="Robust commitment with a false complainer terminates committed and stays concealing.",
    criterion="robust complaint loop",
)
def robust_false_complainer() -> Scenario:
    return load_scenario(
        """
        name: robust-false-complainer
        protocol: commit-robust
        structure: threshold(4,1)
        maximal: 3
        sender: 0
        receiver: 1
        k: 1
        strategy: 3 false-complainer
        checks: concealing
        trials: 50
        """
    )


@scenario(
    name="robust-misdealer",
    description="A sender misdealing to a coalition outside the adversary structure is caught.",
    criterion="robust complaint loop",
)
def robust_misdealer() -> Scenario:
    return load_scenario(
        """
        name: robust-misdealer
        protocol: commit-robust
        structure: threshold(4,1)
        sender: 0
        receiver: 1
        k: 8
        strategy: 0 misdealer 2 3
        trials: 50
        """
    )


def _attack_demo(demo: str) -> Scenario:
    return load_scenario(
        f"""
        name: attack-{demo}
        protocol: attack-demo
        demo: {demo}
        """
    )


@scenario(name="attack-entangling", description="Equal reductions: the commitment is flippable.", criterion="purification attack")
def attack_entangling() -> Scenario:
    return _attack_demo("entangling")


@scenario(name="attack-revealing", description="Orthogonal reductions: Bob distinguishes.", criterion="purification attack")
def attack_revealing() -> Scenario:
    return _attack_demo("revealing")


@scenario(
    name="attack-measure-then-flip",
    description="Alice still flips after measuring a bit-independent ancilla.",
    criterion="purification attack",
)
def attack_measure_then_flip() -> Scenario:
    return _attack_demo("measure-then-flip")


@scenario(
    name="attack-third-party",
    description="A curious third party breaks concealing or binding depending on the side it joins.",
    criterion="purification attack",
)
def attack_third_party() -> Scenario:
    return _attack_demo("third-party")


@scenario(name="bb84-honest", description="Honest BB84 OT delivers b_c.", criterion="BB84 oblivious transfer")
def bb84_honest() -> Scenario:
    return load_scenario(
        """
        name: bb84-honest
        protocol: bb84-ot
        positions: 128
        alpha: 0.5
        payload: 1 0
        choice: 1
        trials: 1000
        """
    )


def _bb84_delayed(tested: int) -> Scenario:
    return load_scenario(
        f"""
        name: bb84-delayed-{tested}
        protocol: bb84-ot
        positions: 128
        alpha: {tested / 128}
        attack: delayed
        trials: 10000
        """
    )


@scenario(name="bb84-delayed-8", description="Delayed-measurement Bob against 8 test positions.", criterion="BB84 oblivious transfer")
def bb84_delayed_8() -> Scenario:
    return _bb84_delayed(8)


@scenario(name="bb84-delayed-16", description="Delayed-measurement Bob against 16 test positions.", criterion="BB84 oblivious transfer")
def bb84_delayed_16() -> Scenario:
    return _bb84_delayed(16)


@scenario(name="bb84-delayed-32", description="Delayed-measurement Bob against 32 test positions.", criterion="BB84 oblivious transfer")
def bb84_delayed_32() -> Scenario:
    return _bb84_delayed(32)


@scenario(
    name="bb84-no-forcing",
    description="Without commitments the delayed-measurement Bob learns both payload bits.",
    criterion="BB84 oblivious transfer",
)
def bb84_no_forcing() -> Scenario:
    return load_scenario(
        """
        name: bb84-no-forcing
        protocol: bb84-ot
        attack: delayed
        forcing: no
        trials: 100
        """
    )


@scenario(name="gmw-majority3", description="Three-party majority over ideal OT, random inputs.", criterion="composition")
def gmw_majority3() -> Scenario:
    return load_scenario(
        """
        name: gmw-majority3
        protocol: gmw
        circuit: majority3
        backend: ideal
        trials: 50
        """
    )


@scenario(
    name="gmw-majority3-bb84",
    description="Majority of (1,1,0) with every OT run over BB84 and oriented against M={2}.",
    criterion="composition",
)
def gmw_majority3_bb84() -> Scenario:
    return load_scenario(
        """
        name: gmw-majority3-bb84
        protocol: gmw
        circuit: majority3
        backend: bb84
        structure: threshold(3,1)
        maximal: 2
        inputs: a=1 b=1 c=0
        trials: 1
        """
    )
