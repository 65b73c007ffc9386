"""Pure-Python propositional kernels (fallback for the compiled ``_kernel``).

Programs are integer-encoded: atom ids ``0..n-1``; rule ``r`` has head
``heads[r]`` (``-1`` for a constraint), positive body
``pos_atoms[pos_ptr[r]:pos_ptr[r+1]]`` and negative body likewise.
``occ_rules[occ_ptr[a]:occ_ptr[a+1]]`` lists the rules with ``a`` in their
positive body.  Assignments use 0 = unknown, 1 = true, 2 = false.
"""

UNKNOWN, TRUE, FALSE = 0, 1, 2


def least_model(n_atoms, heads, pos_ptr, pos_atoms, occ_ptr, occ_rules, enabled):
    """Least model of the enabled rules; returns a bytearray of 0/1 flags."""
    n_rules = len(heads)
    model = bytearray(n_atoms)
    missing = [pos_ptr[r + 1] - pos_ptr[r] for r in range(n_rules)]
    stack = []
    for r in range(n_rules):
        if enabled[r] and missing[r] == 0:
            h = heads[r]
            if h >= 0 and not model[h]:
                model[h] = 1
                stack.append(h)
    while stack:
        a = stack.pop()
        for k in range(occ_ptr[a], occ_ptr[a + 1]):
            r = occ_rules[k]
            missing[r] -= 1
            if missing[r] == 0 and enabled[r]:
                h = heads[r]
                if h >= 0 and not model[h]:
                    model[h] = 1
                    stack.append(h)
    return model


def bounds(n_atoms, heads, pos_ptr, pos_atoms, neg_ptr, neg_atoms, occ_ptr, occ_rules, assign):
    """Lower and upper least models under a partial assignment.

    The lower bound fires rules whose negative body is entirely false; the
    upper bound fires rules with no true atom in their negative body.
    """
    n_rules = len(heads)
    lower_on = bytearray(n_rules)
    upper_on = bytearray(n_rules)
    for r in range(n_rules):
        all_false = True
        any_true = False
        for k in range(neg_ptr[r], neg_ptr[r + 1]):
            v = assign[neg_atoms[k]]
            if v != FALSE:
                all_false = False
            if v == TRUE:
                any_true = True
                break
        lower_on[r] = all_false
        upper_on[r] = not any_true
    lower = least_model(n_atoms, heads, pos_ptr, pos_atoms, occ_ptr, occ_rules, lower_on)
    upper = least_model(n_atoms, heads, pos_ptr, pos_atoms, occ_ptr, occ_rules, upper_on)
    return lower, upper
