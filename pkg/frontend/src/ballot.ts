/** Ballot editor model: a complete ranking that can only be reordered.
 *
 * Every operation returns a new order containing exactly the original
 * ids, so a ballot built through this module is a permutation of the
 * alternatives by construction.
 */

export interface BallotEditor {
  readonly order: readonly string[];
}

export function createEditor(alternativeIds: readonly string[]): BallotEditor {
  const seen = new Set<string>();
  for (const id of alternativeIds) {
    if (seen.has(id)) {
      throw new Error(`duplicate alternative id: ${id}`);
    }
    seen.add(id);
  }
  return { order: [...alternativeIds] };
}

function clampIndex(editor: BallotEditor, index: number): number {
  return Math.max(0, Math.min(editor.order.length - 1, index));
}

/** Move the item at `from` so it sits at `to`; out-of-range indices clamp. */
export function moveItem(editor: BallotEditor, from: number, to: number): BallotEditor {
  if (editor.order.length === 0) {
    return editor;
  }
  const fromIndex = clampIndex(editor, from);
  const toIndex = clampIndex(editor, to);
  if (fromIndex === toIndex) {
    return editor;
  }
  const next = [...editor.order];
  const [item] = next.splice(fromIndex, 1);
  next.splice(toIndex, 0, item as string);
  return { order: next };
}

export function moveUp(editor: BallotEditor, id: string): BallotEditor {
  const index = editor.order.indexOf(id);
  if (index <= 0) {
    return editor;
  }
  return moveItem(editor, index, index - 1);
}

export function moveDown(editor: BallotEditor, id: string): BallotEditor {
  const index = editor.order.indexOf(id);
  if (index === -1 || index === editor.order.length - 1) {
    return editor;
  }
  return moveItem(editor, index, index + 1);
}

/** Drop `draggedId` at the slot currently held by `targetId`. */
export function dropOn(editor: BallotEditor, draggedId: string, targetId: string): BallotEditor {
  const from = editor.order.indexOf(draggedId);
  const to = editor.order.indexOf(targetId);
  if (from === -1 || to === -1) {
    return editor;
  }
  return moveItem(editor, from, to);
}

/** True when the editor holds exactly the given ids, order aside. */
export function coversExactly(editor: BallotEditor, ids: readonly string[]): boolean {
  if (editor.order.length !== ids.length) {
    return false;
  }
  const have = new Set(editor.order);
  return ids.every((id) => have.has(id));
}
