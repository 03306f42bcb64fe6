/**
 * UI string bundles: one flat key->string JSON file per language tag under
 * strings/. Every user-facing string goes through t(); a miss renders a
 * visible ⟦key⟧ marker so untranslated keys cannot hide.
 */
export const MISSING_PREFIX = '⟦'; // ⟦
export const MISSING_SUFFIX = '⟧'; // ⟧
export function createTranslator(bundle) {
    return (key, params) => {
        let text = bundle[key];
        if (text === undefined)
            return `${MISSING_PREFIX}${key}${MISSING_SUFFIX}`;
        for (const [name, value] of Object.entries(params ?? {})) {
            text = text.replaceAll(`{${name}}`, String(value));
        }
        return text;
    };
}
export async function loadBundle(languageTag, fetchFn = (url) => fetch(url)) {
    const response = await fetchFn(`strings/${languageTag}.json`);
    if (!response.ok)
        throw new Error(`no string bundle for ${languageTag}`);
    return response.json();
}
/** Marker scan used by tests and dev tooling: any ⟦…⟧ left in the DOM is a bug. */
export function findMissingMarkers(text) {
    const found = [];
    const pattern = new RegExp(`${MISSING_PREFIX}([^${MISSING_SUFFIX}]*)${MISSING_SUFFIX}`, 'g');
    for (const match of text.matchAll(pattern))
        found.push(match[1]);
    return found;
}
