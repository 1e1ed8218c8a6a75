/** The search cart as a pure state machine.
 *
 * The rendered cart is always `replayCart(actionLog)` — state is a pure
 * function of user actions, so replaying a recorded log reproduces it
 * exactly. Items keep their list order as position 0..n-1; subjects are
 * distinct; an out-of-scope flag parks an item outside query payloads until
 * the user re-activates it. */

export interface CartItem {
  subject: string;
  label: string;
  path: string[];
  active: boolean;
  outOfScope: boolean;
}

export type CartAction =
  | { kind: "add"; subject: string; label: string; path: string[] }
  | { kind: "remove"; subject: string }
  | { kind: "toggle"; subject: string }
  | { kind: "move"; subject: string; to: number }
  | { kind: "flagOutOfScope"; subject: string };

export function applyCartAction(items: readonly CartItem[], action: CartAction): CartItem[] {
  switch (action.kind) {
    case "add": {
      if (items.some((i) => i.subject === action.subject)) return [...items];
      return [
        ...items,
        { subject: action.subject, label: action.label, path: action.path, active: true, outOfScope: false },
      ];
    }
    case "remove":
      return items.filter((i) => i.subject !== action.subject);
    case "toggle":
      return items.map((i) => {
        if (i.subject !== action.subject) return i;
        // re-activating a flagged item clears the flag and tries again
        if (i.outOfScope) return { ...i, outOfScope: false, active: true };
        return { ...i, active: !i.active };
      });
    case "move": {
      const from = items.findIndex((i) => i.subject === action.subject);
      if (from < 0) return [...items];
      const to = Math.max(0, Math.min(items.length - 1, action.to));
      const next = [...items];
      const [moved] = next.splice(from, 1);
      next.splice(to, 0, moved);
      return next;
    }
    case "flagOutOfScope":
      return items.map((i) =>
        i.subject === action.subject ? { ...i, outOfScope: true, active: false } : i,
      );
  }
}

export function replayCart(actions: readonly CartAction[]): CartItem[] {
  return actions.reduce(applyCartAction, [] as CartItem[]);
}

/** Wire payload for a search; flagged items stay local until re-activated. */
export function queryPayload(items: readonly CartItem[]): { subject: string; active: boolean }[] {
  return items.filter((i) => !i.outOfScope).map((i) => ({ subject: i.subject, active: i.active }));
}

export function positions(items: readonly CartItem[]): number[] {
  return items.map((_, index) => index);
}
