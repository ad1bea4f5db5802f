"""The three worked certificates (m = 51, 67, 26), with their original hand-picked choices."""

from .forms import TernaryForm, Vector3
from .witness import Certificate

WORKED_EXAMPLES: dict[str, Certificate] = {
    "example-1": Certificate(
        theorem_id=1, m=51, D=7, case_id=1, a=4217, a_prime=None,
        b=1613, h=2608, A=1568, B=1048,
        form=TernaryForm(48291, 64544, 3136, 21567, 2096, 51),
        eval_vector=Vector3(2, 1, 0), eval_value=7 * 49117,
    ),
    "example-2": Certificate(
        theorem_id=2, m=67, D=11, case_id=3, a=170249, a_prime=None,
        b=4413, h=-27410, A=4174, B=3146,
        form=TernaryForm(262575, 391164, 8348, 147787, 6292, 67),
        eval_vector=Vector3(1, 1, 0), eval_value=801526,
    ),
    "example-3": Certificate(
        theorem_id=3, m=26, D=14, case_id=4, a=55618, a_prime=27809,
        b=8440, h=21666, A=1128, B=-6,
        form=TernaryForm(51077, 1146, 2256, 326, -12, 26),
        eval_vector=Vector3(1, 1, 0), eval_value=7 * 7507,
    ),
}
