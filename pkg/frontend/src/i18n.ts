/**
 * Message catalogs. Every visible label in the client comes from here;
 * t() throws on unknown keys so a missing entry fails loudly instead of
 * leaking a raw key into the page.
 */

export type LocaleCode = "en" | "fr";

export const CATALOGS: Record<LocaleCode, Record<string, string>> = {
  en: {
    "login.email": "Email",
    "login.password": "Password",
    "login.sign_in": "Sign in",
    "login.failed": "Sign-in failed",

    "grid.empty": "No shifts this week",
    "grid.understaffed": "Understaffed",
    "grid.opening_hours": "Opening hours",
    "grid.week_of": "Week of {date}",

    "dropdown.assign": "Assign",
    "dropdown.force": "Override conflicts",
    "dropdown.favorite": "Favorite",
    "dropdown.no_candidates": "No candidates",

    "conflict.OverlapSameSchedule": "Overlaps a shift on this schedule",
    "conflict.OverlapOtherSchedule": "Overlaps a shift on another schedule",
    "conflict.ExternalCalendarEvent": "Busy in an external calendar",
    "conflict.TimeOffOverlap": "Overlaps time off",
    "conflict.OutsideAvailability": "Outside stated availability",

    "quota.max_consecutive_hours": "Consecutive hours over the limit ({would_be} of {limit} min)",
    "quota.max_consecutive_days": "Consecutive days over the limit ({would_be} of {limit})",
    "quota.max_hours_per_day": "Daily hours over the limit ({would_be} of {limit} min)",
    "quota.min_hours_per_week": "Below the weekly minimum ({would_be} of {limit} min)",
    "quota.max_hours_per_week": "Weekly hours over the limit ({would_be} of {limit} min)",
    "quota.max_hours_per_month": "Monthly hours over the limit ({would_be} of {limit} min)",

    "exchange.claim": "Claim",
    "exchange.give_up": "Give up",
    "exchange.drop": "Drop",
    "exchange.swap": "Swap",
    "exchange.accept": "Accept",
    "exchange.cancel": "Cancel",
    "exchange.accepted": "You took the shift.",
    "exchange.not_pending": "This request is no longer pending.",
    "exchange.give_up_opened": "Give-up request opened; your colleagues have been alerted.",
    "exchange.needs_approval": "Awaiting manager approval",

    "kind.Claim": "Claim",
    "kind.GiveUp": "Give-up",
    "kind.Drop": "Drop",
    "kind.Swap": "Swap",

    "state.Open": "Open",
    "state.Accepted": "Accepted",
    "state.ApprovedPending": "Awaiting approval",
    "state.Completed": "Completed",
    "state.Cancelled": "Cancelled",
    "state.Rejected": "Rejected",

    "autoschedule.title": "Auto-schedule",
    "autoschedule.favorites_only": "Favorite staff only",
    "autoschedule.preview": "Preview",
    "autoschedule.apply": "Apply",
    "autoschedule.cancel": "Cancel",
    "autoschedule.assignments": "Proposed assignments ({count})",
    "autoschedule.unfilled": "Unfilled shifts ({count})",
    "autoschedule.stale": "The roster changed underneath; run the preview again.",
    "autoschedule.none": "Nothing to assign.",

    "error.api": "Request failed: {detail}",
  },
  fr: {
    "login.email": "Courriel",
    "login.password": "Mot de passe",
    "login.sign_in": "Connexion",
    "login.failed": "Échec de la connexion",

    "grid.empty": "Aucun quart cette semaine",
    "grid.understaffed": "En sous-effectif",
    "grid.opening_hours": "Heures d'ouverture",
    "grid.week_of": "Semaine du {date}",

    "dropdown.assign": "Affecter",
    "dropdown.force": "Outrepasser les conflits",
    "dropdown.favorite": "Favori",
    "dropdown.no_candidates": "Aucun candidat",

    "conflict.OverlapSameSchedule": "Chevauche un quart de ce planning",
    "conflict.OverlapOtherSchedule": "Chevauche un quart d'un autre planning",
    "conflict.ExternalCalendarEvent": "Occupé selon le calendrier externe",
    "conflict.TimeOffOverlap": "Chevauche un congé",
    "conflict.OutsideAvailability": "Hors des disponibilités déclarées",

    "quota.max_consecutive_hours": "Heures consécutives au-delà de la limite ({would_be} sur {limit} min)",
    "quota.max_consecutive_days": "Jours consécutifs au-delà de la limite ({would_be} sur {limit})",
    "quota.max_hours_per_day": "Heures quotidiennes au-delà de la limite ({would_be} sur {limit} min)",
    "quota.min_hours_per_week": "Sous le minimum hebdomadaire ({would_be} sur {limit} min)",
    "quota.max_hours_per_week": "Heures hebdomadaires au-delà de la limite ({would_be} sur {limit} min)",
    "quota.max_hours_per_month": "Heures mensuelles au-delà de la limite ({would_be} sur {limit} min)",

    "exchange.claim": "Prendre",
    "exchange.give_up": "Céder",
    "exchange.drop": "Abandonner",
    "exchange.swap": "Échanger",
    "exchange.accept": "Accepter",
    "exchange.cancel": "Annuler",
    "exchange.accepted": "Le quart vous a été attribué.",
    "exchange.not_pending": "Cette demande n'est plus en attente.",
    "exchange.give_up_opened": "Demande de cession ouverte; vos collègues sont prévenus.",
    "exchange.needs_approval": "En attente d'approbation du gestionnaire",

    "kind.Claim": "Prise",
    "kind.GiveUp": "Cession",
    "kind.Drop": "Abandon",
    "kind.Swap": "Échange",

    "state.Open": "Ouverte",
    "state.Accepted": "Acceptée",
    "state.ApprovedPending": "En attente d'approbation",
    "state.Completed": "Terminée",
    "state.Cancelled": "Annulée",
    "state.Rejected": "Refusée",

    "autoschedule.title": "Planification automatique",
    "autoschedule.favorites_only": "Personnel favori uniquement",
    "autoschedule.preview": "Aperçu",
    "autoschedule.apply": "Appliquer",
    "autoschedule.cancel": "Annuler",
    "autoschedule.assignments": "Affectations proposées ({count})",
    "autoschedule.unfilled": "Quarts non pourvus ({count})",
    "autoschedule.stale": "Le planning a changé entre-temps; relancez l'aperçu.",
    "autoschedule.none": "Rien à affecter.",

    "error.api": "Échec de la requête : {detail}",
  },
};

export function t(locale: LocaleCode, key: string,
                  params: Record<string, string | number> = {}): string {
  const entry = CATALOGS[locale][key];
  if (entry === undefined) {
    throw new Error(`missing catalog entry: ${locale}/${key}`);
  }
  return entry.replace(/\{(\w+)\}/g, (match, name) => {
    const value = params[name];
    return value === undefined ? match : String(value);
  });
}

function placeholders(entry: string): string[] {
  return [...entry.matchAll(/\{(\w+)\}/g)].map((m) => m[1]).sort();
}

/**
 * Differences between the locales: keys present in one catalog only,
 * empty translations, and entries whose placeholders disagree. An empty
 * result means both catalogs cover exactly the same surface.
 */
export function catalogGaps(): string[] {
  const gaps: string[] = [];
  const locales = Object.keys(CATALOGS) as LocaleCode[];
  const allKeys = new Set<string>();
  for (const locale of locales) {
    for (const key of Object.keys(CATALOGS[locale])) allKeys.add(key);
  }
  for (const key of [...allKeys].sort()) {
    for (const locale of locales) {
      const entry = CATALOGS[locale][key];
      if (entry === undefined) {
        gaps.push(`${locale}: missing ${key}`);
      } else if (entry.trim() === "") {
        gaps.push(`${locale}: empty ${key}`);
      }
    }
    const [first, ...rest] = locales.filter((l) => CATALOGS[l][key] !== undefined);
    for (const locale of rest) {
      const a = placeholders(CATALOGS[first][key]).join(",");
      const b = placeholders(CATALOGS[locale][key]).join(",");
      if (a !== b) {
        gaps.push(`${locale}: placeholder mismatch on ${key} (${b || "none"} vs ${a || "none"})`);
      }
    }
  }
  return gaps;
}
