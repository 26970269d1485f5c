/**
 * Idiom span highlighting over plain text.
 *
 * Spans come from the server detector and are disjoint and ordered, but the
 * renderer re-sorts and drops overlaps defensively: a stale response must
 * never produce nested or out-of-range marks.
 */
import type { IdiomSpan } from "./api.js";

/** Character offsets are code-unit offsets into the original string. */
export function renderHighlighted(
  doc: Document,
  text: string,
  spans: IdiomSpan[],
): DocumentFragment {
  const fragment = doc.createDocumentFragment();
  let cursor = 0;
  for (const span of sanitizeSpans(text, spans)) {
    if (span.start > cursor) {
      fragment.appendChild(doc.createTextNode(text.slice(cursor, span.start)));
    }
    const mark = doc.createElement("mark");
    mark.className = "idiom";
    mark.textContent = text.slice(span.start, span.end);
    fragment.appendChild(mark);
    cursor = span.end;
  }
  if (cursor < text.length) {
    fragment.appendChild(doc.createTextNode(text.slice(cursor)));
  }
  return fragment;
}

export function sanitizeSpans(text: string, spans: IdiomSpan[]): IdiomSpan[] {
  const sorted = [...spans].sort((a, b) => a.start - b.start || a.end - b.end);
  const kept: IdiomSpan[] = [];
  let cursor = 0;
  for (const span of sorted) {
    if (span.start < cursor || span.end > text.length || span.start >= span.end) {
      continue;
    }
    kept.push(span);
    cursor = span.end;
  }
  return kept;
}
