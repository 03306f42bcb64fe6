/**
 * UI string bundles: one flat key->string JSON file per language tag under
 * strings/. Every user-facing string goes through t(); a miss renders a
 * visible ⟦key⟧ marker so untranslated keys cannot hide.
 */

export type UiStringBundle = Record<string, string>;

export const MISSING_PREFIX = '⟦'; // ⟦
export const MISSING_SUFFIX = '⟧'; // ⟧

export function createTranslator(bundle: UiStringBundle) {
  return (key: string, params?: Record<string, string | number>): string => {
    let text = bundle[key];
    if (text === undefined) return `${MISSING_PREFIX}${key}${MISSING_SUFFIX}`;
    for (const [name, value] of Object.entries(params ?? {})) {
      text = text.replaceAll(`{${name}}`, String(value));
    }
    return text;
  };
}

export type Translator = ReturnType<typeof createTranslator>;

export async function loadBundle(
  languageTag: string,
  fetchFn: (url: string) => Promise<Response> = (url) => fetch(url),
): Promise<UiStringBundle> {
  const response = await fetchFn(`strings/${languageTag}.json`);
  if (!response.ok) throw new Error(`no string bundle for ${languageTag}`);
  return response.json();
}

/** Marker scan used by tests and dev tooling: any ⟦…⟧ left in the DOM is a bug. */
export function findMissingMarkers(text: string): string[] {
  const found: string[] = [];
  const pattern = new RegExp(`${MISSING_PREFIX}([^${MISSING_SUFFIX}]*)${MISSING_SUFFIX}`, 'g');
  for (const match of text.matchAll(pattern)) found.push(match[1]);
  return found;
}
